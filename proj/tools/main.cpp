#include "cli_app.hpp"

int main(int argc, char** argv) {
  return depthmap::cli::run_cli(argc, argv);
}
