#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

// Data-parallel inner loops used throughout the library: weighted dot
// products (the discrete L2 inner product), plain dots, and axpy updates.
// A scalar reference implementation always exists; AVX2 and NEON variants
// are compiled when the target architecture allows and one of them is
// selected at runtime from cpu capabilities. The environment variable
// GALERKIN_ADVERSARY_KERNELS=scalar|avx2|neon overrides the choice.

namespace galcert::kernels {

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);

/// True when the variant was compiled into this binary.
bool compiled(Backend b);

/// True when the variant is compiled and the running cpu supports it.
bool usable(Backend b);

/// Backend the dispatched entry points currently route to.
Backend active();

/// Force a backend (throws galcert::Error on an unusable one). Intended for
/// tests and the env-var override; not safe to race against in-flight calls.
void use(Backend b);

// Dispatched entry points.
double dot(std::span<const double> a, std::span<const double> b);
double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Direct per-backend entry points for equivalence tests.
double dot_via(Backend backend, std::span<const double> a, std::span<const double> b);
double weighted_dot_via(Backend backend, std::span<const double> w,
                        std::span<const double> a, std::span<const double> b);
void axpy_via(Backend backend, double alpha, std::span<const double> x, std::span<double> y);

}  // namespace galcert::kernels
