#pragma once

#include "depthmap/architecture.hpp"
#include "depthmap/circuit.hpp"
#include "depthmap/errors.hpp"
#include "depthmap/gate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace depthmap {

struct Register {
  std::string name;
  std::size_t size = 0;
  /// Index of the register's first element in the flattened space.
  std::size_t offset = 0;

  friend bool operator==(const Register&, const Register&) = default;
};

/// A parsed OpenQASM 2.0 file. All quantum registers are flattened into the
/// circuit's single index space in declaration order; classical registers
/// likewise for measure targets.
struct QasmProgram {
  std::vector<Register> qregs;
  std::vector<Register> cregs;
  Circuit circuit;
  std::string filename;
  /// Source line of each gate, indexed by gate id.
  std::vector<std::size_t> source_lines;

  [[nodiscard]] std::size_t num_clbits() const {
    return cregs.empty() ? 0 : cregs.back().offset + cregs.back().size;
  }

  /// Program with a single `q` register around an existing circuit.
  static QasmProgram from_circuit(Circuit circuit,
                                  std::vector<Register> cregs = {}) {
    QasmProgram program;
    program.qregs.push_back({"q", circuit.num_qubits(), 0});
    program.cregs = std::move(cregs);
    program.circuit = std::move(circuit);
    return program;
  }
};

namespace detail {

enum class TokenKind { Identifier, Number, String, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t line = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    Token token;
    token.line = line_;
    if (pos_ >= text_.size()) {
      return token;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const auto start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      token.kind = TokenKind::Identifier;
      token.text = std::string(text_.substr(start, pos_ - start));
      return token;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      const auto start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.')) {
        ++pos_;
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        auto look = pos_ + 1;
        if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
          ++look;
        }
        if (look < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[look]))) {
          pos_ = look;
          while (pos_ < text_.size() &&
                 std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
          }
        }
      }
      token.kind = TokenKind::Number;
      token.text = std::string(text_.substr(start, pos_ - start));
      return token;
    }
    if (c == '"') {
      const auto start = ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') {
        ++pos_;
      }
      if (pos_ >= text_.size() || text_[pos_] != '"') {
        throw ParseError(line_, "unterminated string");
      }
      token.kind = TokenKind::String;
      token.text = std::string(text_.substr(start, pos_ - start));
      ++pos_;
      return token;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      pos_ += 2;
      token.kind = TokenKind::Symbol;
      token.text = "->";
      return token;
    }
    if (std::string_view("()[]{},;+-*/^=<>").find(c) != std::string_view::npos) {
      ++pos_;
      token.kind = TokenKind::Symbol;
      token.text = std::string(1, c);
      return token;
    }
    throw ParseError(line_, std::string("unexpected character '") + c + "'");
  }

private:
  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          ++pos_;
        }
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

class QasmParser {
public:
  explicit QasmParser(std::string_view text) : lexer_(text) { advance(); }

  QasmProgram parse() {
    expect_identifier("OPENQASM");
    if (current_.kind != TokenKind::Number || current_.text != "2.0") {
      throw ParseError(current_.line, "only OPENQASM 2.0 is supported");
    }
    advance();
    expect_symbol(";");
    while (current_.kind != TokenKind::End) {
      statement();
    }
    program_.circuit = Circuit(num_qubits_);
    for (auto& pending : pending_) {
      program_.circuit.append(std::move(pending.gate));
      program_.source_lines.push_back(pending.line);
    }
    return std::move(program_);
  }

private:
  struct Operand {
    const Register* reg = nullptr;
    std::optional<std::size_t> index;
  };

  struct PendingGate {
    Gate gate;
    std::size_t line = 0;
  };

  void advance() { current_ = lexer_.next(); }

  [[nodiscard]] bool at_symbol(std::string_view symbol) const {
    return current_.kind == TokenKind::Symbol && current_.text == symbol;
  }

  void expect_symbol(std::string_view symbol) {
    if (!at_symbol(symbol)) {
      throw ParseError(current_.line, "expected '" + std::string(symbol) +
                                          "' but found " + describe(current_));
    }
    advance();
  }

  void expect_identifier(std::string_view word) {
    if (current_.kind != TokenKind::Identifier || current_.text != word) {
      throw ParseError(current_.line, "expected '" + std::string(word) +
                                          "' but found " + describe(current_));
    }
    advance();
  }

  std::string identifier() {
    if (current_.kind != TokenKind::Identifier) {
      throw ParseError(current_.line,
                       "expected identifier but found " + describe(current_));
    }
    auto text = current_.text;
    advance();
    return text;
  }

  std::size_t integer() {
    if (current_.kind != TokenKind::Number ||
        current_.text.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError(current_.line,
                       "expected integer but found " + describe(current_));
    }
    std::size_t value = 0;
    for (const char c : current_.text) {
      const auto digit = static_cast<std::size_t>(c - '0');
      if (value > (static_cast<std::size_t>(-1) - digit) / 10) {
        throw ParseError(current_.line, "integer too large");
      }
      value = value * 10 + digit;
    }
    advance();
    return value;
  }

  static std::string describe(const Token& token) {
    switch (token.kind) {
    case TokenKind::End: return "end of input";
    case TokenKind::String: return "\"" + token.text + "\"";
    default: return "'" + token.text + "'";
    }
  }

  void statement() {
    const auto line = current_.line;
    if (current_.kind != TokenKind::Identifier) {
      throw ParseError(line, "expected statement but found " + describe(current_));
    }
    const auto word = current_.text;
    if (word == "include") {
      advance();
      if (current_.kind != TokenKind::String) {
        throw ParseError(line, "expected include file name");
      }
      if (current_.text != "qelib1.inc") {
        throw ParseError(line, "cannot include '" + current_.text + "'");
      }
      advance();
      expect_symbol(";");
    } else if (word == "qreg" || word == "creg") {
      advance();
      declaration(word == "qreg");
    } else if (word == "gate" || word == "opaque") {
      advance();
      const auto name = current_.kind == TokenKind::Identifier ? current_.text : word;
      throw UnsupportedGate(line, name);
    } else if (word == "if") {
      throw ParseError(line, "conditional statements are not supported");
    } else if (word == "measure") {
      advance();
      measure(line);
    } else {
      advance();
      gate_application(word, line);
    }
  }

  void declaration(bool quantum) {
    const auto line = current_.line;
    auto name = identifier();
    expect_symbol("[");
    const auto size = integer();
    expect_symbol("]");
    expect_symbol(";");
    if (size == 0) {
      throw ParseError(line, "register '" + name + "' has size 0");
    }
    if (find_register(program_.qregs, name) || find_register(program_.cregs, name)) {
      throw ParseError(line, "register '" + name + "' redeclared");
    }
    auto& list = quantum ? program_.qregs : program_.cregs;
    auto& total = quantum ? num_qubits_ : num_clbits_;
    list.push_back({std::move(name), size, total});
    total += size;
  }

  static const Register* find_register(const std::vector<Register>& list,
                                       const std::string& name) {
    for (const auto& reg : list) {
      if (reg.name == name) {
        return &reg;
      }
    }
    return nullptr;
  }

  Operand operand(bool quantum) {
    const auto line = current_.line;
    const auto name = identifier();
    const auto* reg = find_register(quantum ? program_.qregs : program_.cregs, name);
    if (reg == nullptr) {
      throw ParseError(line, std::string(quantum ? "unknown qreg '" : "unknown creg '") +
                                 name + "'");
    }
    Operand op{reg, std::nullopt};
    if (at_symbol("[")) {
      advance();
      const auto index_line = current_.line;
      const auto index = integer();
      expect_symbol("]");
      if (index >= reg->size) {
        throw IndexOutOfRange(index_line, name + "[" + std::to_string(index) +
                                              "] outside register of size " +
                                              std::to_string(reg->size));
      }
      op.index = index;
    }
    return op;
  }

  std::vector<Operand> operand_list() {
    std::vector<Operand> ops;
    ops.push_back(operand(true));
    while (at_symbol(",")) {
      advance();
      ops.push_back(operand(true));
    }
    return ops;
  }

  /// Broadcast size of a register-wide application, 0 when all operands
  /// are indexed.
  static std::size_t broadcast_width(const std::vector<Operand>& ops,
                                     std::size_t line) {
    std::size_t width = 0;
    for (const auto& op : ops) {
      if (!op.index) {
        if (width != 0 && width != op.reg->size) {
          throw ParseError(line, "register sizes differ in broadcast");
        }
        width = op.reg->size;
      }
    }
    return width;
  }

  static std::size_t resolve(const Operand& op, std::size_t element) {
    return op.reg->offset + (op.index ? *op.index : element);
  }

  void measure(std::size_t line) {
    const auto source = operand(true);
    expect_symbol("->");
    const auto target = operand(false);
    expect_symbol(";");
    const auto q_width = source.index ? 0 : source.reg->size;
    const auto c_width = target.index ? 0 : target.reg->size;
    if (q_width != c_width) {
      throw ParseError(line, "measure operands have different widths");
    }
    const auto count = q_width == 0 ? 1 : q_width;
    for (std::size_t i = 0; i < count; ++i) {
      Gate gate;
      gate.kind = GateKind::Measure;
      gate.qubits = {resolve(source, i)};
      gate.clbit = resolve(target, i);
      gate.latency = default_latency(GateKind::Measure);
      pending_.push_back({std::move(gate), line});
    }
  }

  void gate_application(const std::string& name, std::size_t line) {
    const auto kind = gate_kind_from_name(name);
    if (!kind || *kind == GateKind::Measure) {
      throw UnsupportedGate(line, name);
    }
    std::vector<double> params;
    if (at_symbol("(")) {
      advance();
      if (!at_symbol(")")) {
        params.push_back(expression());
        while (at_symbol(",")) {
          advance();
          params.push_back(expression());
        }
      }
      expect_symbol(")");
    }
    if (params.size() != param_count(*kind)) {
      throw ParseError(line, "'" + name + "' expects " +
                                 std::to_string(param_count(*kind)) +
                                 " parameter(s)");
    }
    const auto ops = operand_list();
    expect_symbol(";");
    if (const auto arity = fixed_arity(*kind); arity && ops.size() != *arity) {
      throw ParseError(line, "'" + name + "' expects " + std::to_string(*arity) +
                                 " operand(s)");
    }

    if (*kind == GateKind::Barrier) {
      Gate gate;
      gate.kind = GateKind::Barrier;
      gate.latency = 0;
      for (const auto& op : ops) {
        const auto count = op.index ? 1 : op.reg->size;
        for (std::size_t i = 0; i < count; ++i) {
          const auto q = resolve(op, i);
          if (std::find(gate.qubits.begin(), gate.qubits.end(), q) ==
              gate.qubits.end()) {
            gate.qubits.push_back(q);
          }
        }
      }
      pending_.push_back({std::move(gate), line});
      return;
    }

    const auto width = broadcast_width(ops, line);
    const auto count = width == 0 ? 1 : width;
    for (std::size_t i = 0; i < count; ++i) {
      Gate gate;
      gate.kind = *kind;
      gate.params = params;
      gate.latency = default_latency(*kind);
      for (const auto& op : ops) {
        const auto q = resolve(op, i);
        if (std::find(gate.qubits.begin(), gate.qubits.end(), q) !=
            gate.qubits.end()) {
          throw ParseError(line, "repeated operand in '" + name + "'");
        }
        gate.qubits.push_back(q);
      }
      pending_.push_back({std::move(gate), line});
    }
  }

  // expression := term (('+' | '-') term)*
  double expression() {
    double value = term();
    while (at_symbol("+") || at_symbol("-")) {
      const bool plus = at_symbol("+");
      advance();
      const double rhs = term();
      value = plus ? value + rhs : value - rhs;
    }
    return value;
  }

  // term := unary (('*' | '/') unary)*
  double term() {
    double value = unary();
    while (at_symbol("*") || at_symbol("/")) {
      const bool times = at_symbol("*");
      advance();
      const double rhs = unary();
      value = times ? value * rhs : value / rhs;
    }
    return value;
  }

  // unary := ('-' | '+') unary | power
  double unary() {
    if (at_symbol("-")) {
      advance();
      return -unary();
    }
    if (at_symbol("+")) {
      advance();
      return unary();
    }
    return power();
  }

  // power := primary ('^' unary)?
  double power() {
    const double base = primary();
    if (at_symbol("^")) {
      advance();
      return std::pow(base, unary());
    }
    return base;
  }

  double primary() {
    const auto line = current_.line;
    if (current_.kind == TokenKind::Number) {
      const auto text = current_.text;
      advance();
      try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used == text.size()) {
          return value;
        }
      } catch (const std::exception&) {
      }
      throw ParseError(line, "malformed number '" + text + "'");
    }
    if (at_symbol("(")) {
      advance();
      const double value = expression();
      expect_symbol(")");
      return value;
    }
    if (current_.kind == TokenKind::Identifier) {
      const auto name = current_.text;
      advance();
      if (name == "pi") {
        return std::numbers::pi;
      }
      double (*fn)(double) = nullptr;
      if (name == "sin") fn = [](double x) { return std::sin(x); };
      else if (name == "cos") fn = [](double x) { return std::cos(x); };
      else if (name == "tan") fn = [](double x) { return std::tan(x); };
      else if (name == "exp") fn = [](double x) { return std::exp(x); };
      else if (name == "ln") fn = [](double x) { return std::log(x); };
      else if (name == "sqrt") fn = [](double x) { return std::sqrt(x); };
      if (fn == nullptr) {
        throw ParseError(line, "unknown identifier '" + name + "' in expression");
      }
      expect_symbol("(");
      const double arg = expression();
      expect_symbol(")");
      return fn(arg);
    }
    throw ParseError(line, "expected expression but found " + describe(current_));
  }

  Lexer lexer_;
  Token current_;
  QasmProgram program_;
  std::size_t num_qubits_ = 0;
  std::size_t num_clbits_ = 0;
  std::vector<PendingGate> pending_;
};

inline std::string format_angle(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

inline std::string element_name(const std::vector<Register>& regs,
                                std::size_t index) {
  for (const auto& reg : regs) {
    if (index >= reg.offset && index < reg.offset + reg.size) {
      return reg.name + "[" + std::to_string(index - reg.offset) + "]";
    }
  }
  throw Error("index " + std::to_string(index) + " not covered by any register");
}

} // namespace detail

[[nodiscard]] inline QasmProgram parse_qasm(std::string_view text,
                                            std::string filename = {}) {
  auto program = detail::QasmParser(text).parse();
  program.filename = std::move(filename);
  return program;
}

[[nodiscard]] inline QasmProgram read_qasm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_qasm(buffer.str(), path);
}

struct EmitOptions {
  /// Write symbolic SWAPs as CNOT sequences.
  bool decompose_swaps = false;
  /// Link orientations used for the decomposition; null means every pair is
  /// a bidirectional link.
  const CouplingGraph* graph = nullptr;
};

[[nodiscard]] inline std::string emit_qasm(const QasmProgram& program,
                                           const EmitOptions& options = {}) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  for (const auto& reg : program.qregs) {
    out << "qreg " << reg.name << '[' << reg.size << "];\n";
  }
  for (const auto& reg : program.cregs) {
    out << "creg " << reg.name << '[' << reg.size << "];\n";
  }
  const auto write_gate = [&](const Gate& gate) {
    out << qasm_name(gate.kind);
    if (!gate.params.empty()) {
      out << '(';
      for (std::size_t i = 0; i < gate.params.size(); ++i) {
        out << (i ? "," : "") << detail::format_angle(gate.params[i]);
      }
      out << ')';
    }
    for (std::size_t i = 0; i < gate.qubits.size(); ++i) {
      out << (i ? "," : " ") << detail::element_name(program.qregs, gate.qubits[i]);
    }
    if (gate.kind == GateKind::Measure) {
      out << " -> " << detail::element_name(program.cregs, *gate.clbit);
    }
    out << ";\n";
  };
  for (const auto& gate : program.circuit.gates()) {
    if (gate.kind == GateKind::SWAP && options.decompose_swaps) {
      const auto a = gate.qubits[0];
      const auto b = gate.qubits[1];
      if (options.graph != nullptr) {
        for (const auto& part : decompose_swap(a, b, *options.graph)) {
          write_gate(part);
        }
      } else {
        write_gate(physical_cnot(a, b));
        write_gate(physical_cnot(b, a));
        write_gate(physical_cnot(a, b));
      }
      continue;
    }
    write_gate(gate);
  }
  return out.str();
}

} // namespace depthmap
