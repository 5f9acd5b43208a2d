#pragma once

#include <stdexcept>
#include <string>

namespace galcert {

/// Error taxonomy shared by the library and the CLI exit-code mapping.
enum class errc {
  invalid_argument,    // bad ranges, counts, sizes
  grid_mismatch,       // operands live on different quadrature grids
  independence_loss,   // a sampled family fails the independence threshold
  images_dependent,    // operator images fail the independence threshold
  cannot_extend,       // trial system cannot be extended to T independent images
  singular_system,     // Galerkin matrix is degenerate
  size_limit,          // Cramer path refused beyond its size cap
  no_witness,          // constraint null space is empty
  singular_gram,       // Gram matrix not positive definite where required
  incompatible_spaces, // operator cannot be read as a self-map
  config_error,        // scenario/config/witness file parse or validation failure
  io_error,            // filesystem failure
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message, long detail = -1)
      : std::runtime_error(message), code_(code), detail_(detail) {}

  errc code() const noexcept { return code_; }

  /// Context-dependent payload (e.g. the achieved rank for cannot_extend).
  long detail() const noexcept { return detail_; }

 private:
  errc code_;
  long detail_;
};

}  // namespace galcert
