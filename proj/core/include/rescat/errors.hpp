#pragma once

#include <stdexcept>
#include <string>

namespace rescat {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Potential construction
class ParameterOrdering : public Error { public: using Error::Error; };
class DegenerateRates : public Error { public: using Error::Error; };
class SingularWronskian : public Error { public: using Error::Error; };
class PoleOfJost : public Error { public: using Error::Error; };

// Continuum scattering
class NodeAtMatching : public Error { public: using Error::Error; };
class IntegratorFailure : public Error { public: using Error::Error; };
class NoConvergence : public Error { public: using Error::Error; };
class EmptyRegion : public Error { public: using Error::Error; };

// Lattice / effective Hamiltonian
class MisalignedRadius : public Error { public: using Error::Error; };
class SingularSystem : public Error { public: using Error::Error; };

// Pole finding / trajectories
class GridTooCoarse : public Error { public: using Error::Error; };
class BranchLoss : public Error { public: using Error::Error; };
class WindowUncovered : public Error { public: using Error::Error; };

// CLI / configuration
class ConfigError : public Error { public: using Error::Error; };

}  // namespace rescat
