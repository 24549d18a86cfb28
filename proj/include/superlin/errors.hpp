#pragma once

#include <stdexcept>
#include <string>

namespace superlin {

enum class errc {
  parse_error,
  partition_mismatch,
  incompatible_partition,
  component_count_mismatch,
  non_square_block,
  singular_block,
  zero_polynomial,
  not_an_eigenvalue,
  not_diagonalizable,
  not_normal,
  not_self_adjoint,
  negative_spectrum,
  dependent_block,
  not_symmetric,
  not_skew,
  negative_steps,
  not_ergodic,
  no_nonnegative_solution,
  not_productive,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::parse_error: return "ParseError";
    case errc::partition_mismatch: return "PartitionMismatch";
    case errc::incompatible_partition: return "IncompatiblePartition";
    case errc::component_count_mismatch: return "ComponentCountMismatch";
    case errc::non_square_block: return "NonSquareBlock";
    case errc::singular_block: return "SingularBlock";
    case errc::zero_polynomial: return "ZeroPolynomial";
    case errc::not_an_eigenvalue: return "NotAnEigenvalue";
    case errc::not_diagonalizable: return "NotDiagonalizable";
    case errc::not_normal: return "NotNormal";
    case errc::not_self_adjoint: return "NotSelfAdjoint";
    case errc::negative_spectrum: return "NegativeSpectrum";
    case errc::dependent_block: return "DependentBlock";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::not_skew: return "NotSkew";
    case errc::negative_steps: return "NegativeSteps";
    case errc::not_ergodic: return "NotErgodic";
    case errc::no_nonnegative_solution: return "NoNonnegativeSolution";
    case errc::not_productive: return "NotProductive";
  }
  return "?";
}

class super_error : public std::runtime_error {
public:
  errc code;
  super_error(errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw super_error(c, msg); }

} // namespace superlin
