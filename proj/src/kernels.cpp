#include "galcert/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>

#include "galcert/errors.hpp"

namespace galcert::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double weighted_dot_scalar(const double* w, const double* a, const double* b,
                           std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

#if defined(GALCERT_COMPILE_AVX2)
// Implemented in kernels_avx2.cpp (compiled with -mavx2 -mfma).
double dot_avx2(const double* a, const double* b, std::size_t n);
double weighted_dot_avx2(const double* w, const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
#endif

#if defined(GALCERT_COMPILE_NEON)
// Implemented in kernels_neon.cpp.
double dot_neon(const double* a, const double* b, std::size_t n);
double weighted_dot_neon(const double* w, const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
#endif

struct Impl {
  Backend backend;
  double (*dot)(const double*, const double*, std::size_t);
  double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr Impl kScalarImpl{Backend::scalar, dot_scalar, weighted_dot_scalar, axpy_scalar};

#if defined(GALCERT_COMPILE_AVX2)
constexpr Impl kAvx2Impl{Backend::avx2, dot_avx2, weighted_dot_avx2, axpy_avx2};
#endif
#if defined(GALCERT_COMPILE_NEON)
constexpr Impl kNeonImpl{Backend::neon, dot_neon, weighted_dot_neon, axpy_neon};
#endif

const Impl* impl_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &kScalarImpl;
    case Backend::avx2:
#if defined(GALCERT_COMPILE_AVX2)
      return &kAvx2Impl;
#else
      return nullptr;
#endif
    case Backend::neon:
#if defined(GALCERT_COMPILE_NEON)
      return &kNeonImpl;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(GALCERT_COMPILE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(GALCERT_COMPILE_NEON)
      return true;  // NEON is baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

Backend pick_default() {
  if (const char* env = std::getenv("GALERKIN_ADVERSARY_KERNELS")) {
    std::string name(env);
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
      if (name == backend_name(b) && usable(b)) return b;
    }
    // Unknown or unusable request: fall through to auto-detection.
  }
#if defined(GALCERT_COMPILE_AVX2)
  if (cpu_supports(Backend::avx2)) return Backend::avx2;
#endif
#if defined(GALCERT_COMPILE_NEON)
  if (cpu_supports(Backend::neon)) return Backend::neon;
#endif
  return Backend::scalar;
}

std::atomic<const Impl*> g_impl{nullptr};
std::once_flag g_init_flag;

const Impl& current() {
  const Impl* impl = g_impl.load(std::memory_order_acquire);
  if (!impl) {
    std::call_once(g_init_flag, [] {
      g_impl.store(impl_for(pick_default()), std::memory_order_release);
    });
    impl = g_impl.load(std::memory_order_acquire);
  }
  return *impl;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw Error(errc::invalid_argument, "kernel operand length mismatch");
}

}  // namespace detail

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "?";
}

bool compiled(Backend b) { return detail::impl_for(b) != nullptr; }

bool usable(Backend b) { return compiled(b) && detail::cpu_supports(b); }

Backend active() { return detail::current().backend; }

void use(Backend b) {
  if (!usable(b))
    throw Error(errc::invalid_argument,
                std::string("kernel backend not usable on this host: ") + backend_name(b));
  detail::current();  // ensure init happened so the store below wins
  detail::g_impl.store(detail::impl_for(b), std::memory_order_release);
}

double dot(std::span<const double> a, std::span<const double> b) {
  detail::check_sizes(a.size(), b.size());
  return detail::current().dot(a.data(), b.data(), a.size());
}

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
  detail::check_sizes(w.size(), a.size());
  detail::check_sizes(a.size(), b.size());
  return detail::current().weighted_dot(w.data(), a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  detail::check_sizes(x.size(), y.size());
  detail::current().axpy(alpha, x.data(), y.data(), x.size());
}

double dot_via(Backend backend, std::span<const double> a, std::span<const double> b) {
  if (!usable(backend)) throw Error(errc::invalid_argument, "backend not usable");
  detail::check_sizes(a.size(), b.size());
  return detail::impl_for(backend)->dot(a.data(), b.data(), a.size());
}

double weighted_dot_via(Backend backend, std::span<const double> w,
                        std::span<const double> a, std::span<const double> b) {
  if (!usable(backend)) throw Error(errc::invalid_argument, "backend not usable");
  detail::check_sizes(w.size(), a.size());
  detail::check_sizes(a.size(), b.size());
  return detail::impl_for(backend)->weighted_dot(w.data(), a.data(), b.data(), a.size());
}

void axpy_via(Backend backend, double alpha, std::span<const double> x, std::span<double> y) {
  if (!usable(backend)) throw Error(errc::invalid_argument, "backend not usable");
  detail::check_sizes(x.size(), y.size());
  detail::impl_for(backend)->axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace galcert::kernels
