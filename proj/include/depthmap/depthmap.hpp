#pragma once

#include "depthmap/architecture.hpp"
#include "depthmap/circuit.hpp"
#include "depthmap/dependency_graph.hpp"
#include "depthmap/errors.hpp"
#include "depthmap/gate.hpp"
#include "depthmap/mapping.hpp"
#include "depthmap/qasm.hpp"
#include "depthmap/router.hpp"
#include "depthmap/statevector.hpp"
#include "depthmap/verifier.hpp"
