#include "cbp/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "cbp/error.hpp"
#include "fft_internal.hpp"

namespace cbp {
namespace {

/* FFTW plan creation is not thread-safe; plans are cached per (kind, M, N)
   and executed through the new-array interface, which is. All buffers come
   from fftw_malloc so alignment matches the plan. */

enum class PlanKind { c2c_fwd, c2c_bwd, r2c_2d, c2r_2d, r2c_cols, r2c_rows };

struct PlanKey {
  PlanKind kind;
  int rows, cols;
  bool operator<(const PlanKey& o) const {
    return std::tie(kind, rows, cols) < std::tie(o.kind, o.rows, o.cols);
  }
};

class PlanCache {
 public:
  fftw_plan get(PlanKey key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_plan p = make(key);
    plans_.emplace(key, p);
    return p;
  }

 private:
  /* Column-major M x N data is a row-major N x M array to FFTW. */
  static fftw_plan make(PlanKey k) {
    const int M = k.rows, N = k.cols;
    const int half = M / 2 + 1;
    switch (k.kind) {
      case PlanKind::c2c_fwd:
      case PlanKind::c2c_bwd: {
        fftw_complex* a = fftw_alloc_complex(size_t(M) * N);
        fftw_complex* b = fftw_alloc_complex(size_t(M) * N);
        int sign = k.kind == PlanKind::c2c_fwd ? FFTW_FORWARD : FFTW_BACKWARD;
        fftw_plan p = fftw_plan_dft_2d(N, M, a, b, sign, FFTW_ESTIMATE);
        fftw_free(a);
        fftw_free(b);
        return p;
      }
      case PlanKind::r2c_2d: {
        double* a = fftw_alloc_real(size_t(M) * N);
        fftw_complex* b = fftw_alloc_complex(size_t(half) * N);
        fftw_plan p = fftw_plan_dft_r2c_2d(N, M, a, b, FFTW_ESTIMATE);
        fftw_free(a);
        fftw_free(b);
        return p;
      }
      case PlanKind::c2r_2d: {
        fftw_complex* a = fftw_alloc_complex(size_t(half) * N);
        double* b = fftw_alloc_real(size_t(M) * N);
        fftw_plan p = fftw_plan_dft_c2r_2d(N, M, a, b, FFTW_ESTIMATE);
        fftw_free(a);
        fftw_free(b);
        return p;
      }
      case PlanKind::r2c_cols: {
        /* length-M transform down each of the N contiguous columns */
        double* a = fftw_alloc_real(size_t(M) * N);
        fftw_complex* b = fftw_alloc_complex(size_t(half) * N);
        int n = M;
        fftw_plan p = fftw_plan_many_dft_r2c(1, &n, N, a, nullptr, 1, M, b, nullptr, 1, half,
                                             FFTW_ESTIMATE);
        fftw_free(a);
        fftw_free(b);
        return p;
      }
      case PlanKind::r2c_rows: {
        /* length-N transform across each of the M rows (stride M) */
        double* a = fftw_alloc_real(size_t(M) * N);
        fftw_complex* b = fftw_alloc_complex(size_t(M) * (N / 2 + 1));
        int n = N;
        fftw_plan p = fftw_plan_many_dft_r2c(1, &n, M, a, nullptr, M, 1, b, nullptr, M, 1,
                                             FFTW_ESTIMATE);
        fftw_free(a);
        fftw_free(b);
        return p;
      }
    }
    return nullptr;
  }

  std::mutex mu_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

/* Scratch buffers are recycled per thread: repeated multi-megabyte
   fftw_malloc/fftw_free pairs go through mmap and cost more than the
   transforms themselves on video-sized frames. */
class BufPool {
 public:
  void* take(size_t bytes) {
    auto it = free_.find(bytes);
    if (it != free_.end() && !it->second.empty()) {
      void* p = it->second.back();
      it->second.pop_back();
      return p;
    }
    return fftw_malloc(bytes);
  }
  void give(size_t bytes, void* p) {
    auto& stash = free_[bytes];
    if (stash.size() < 6)
      stash.push_back(p);
    else
      fftw_free(p);
  }
  ~BufPool() {
    for (auto& [bytes, stash] : free_)
      for (void* p : stash) fftw_free(p);
  }

 private:
  std::map<size_t, std::vector<void*>> free_;
};

BufPool& pool() {
  thread_local BufPool p;
  return p;
}

struct RealBuf {
  explicit RealBuf(size_t n)
      : bytes(n * sizeof(double)), p(static_cast<double*>(pool().take(n * sizeof(double)))) {}
  ~RealBuf() { pool().give(bytes, p); }
  size_t bytes;
  double* p;
};

struct ComplexBuf {
  explicit ComplexBuf(size_t n)
      : bytes(n * sizeof(fftw_complex)),
        p(static_cast<fftw_complex*>(pool().take(n * sizeof(fftw_complex)))) {}
  ~ComplexBuf() { pool().give(bytes, p); }
  size_t bytes;
  fftw_complex* p;
};

CMat run_c2c(const CMat& x, PlanKind kind) {
  const int M = int(x.rows()), N = int(x.cols());
  require(M >= 1 && N >= 1, Errc::invalid_argument, "fft2 needs a nonempty array");
  fftw_plan plan = cache().get({kind, M, N});
  ComplexBuf in(size_t(M) * N), out(size_t(M) * N);
  std::memcpy(in.p, x.data(), sizeof(cplx) * size_t(M) * N);
  fftw_execute_dft(plan, in.p, out.p);
  CMat y(M, N);
  std::memcpy(y.data(), out.p, sizeof(cplx) * size_t(M) * N);
  return y;
}

}  // namespace

CMat fft2(const CMat& x) { return run_c2c(x, PlanKind::c2c_fwd); }

CMat fft2(const Mat& x) {
  const int M = int(x.rows()), N = int(x.cols());
  int full = 0;
  CMat half = detail::fft2_real_half(x, &full);
  /* unfold the conjugate-symmetric rows */
  CMat y(M, N);
  y.topRows(half.rows()) = half;
  for (int u = int(half.rows()); u < M; ++u)
    for (int v = 0; v < N; ++v) y(u, v) = std::conj(half(M - u, v == 0 ? 0 : N - v));
  return y;
}

CMat ifft2(const CMat& x) {
  CMat y = run_c2c(x, PlanKind::c2c_bwd);
  y /= double(x.rows()) * double(x.cols());
  return y;
}

CMat axis_roots_dft(const Mat& plane, Axis axis, int t) {
  const int M = int(plane.rows()), N = int(plane.cols());
  require(M >= 1 && N >= 1, Errc::invalid_argument, "axis_roots_dft needs a nonempty plane");
  require(t >= 1, Errc::invalid_argument, "axis_roots_dft needs t >= 1");
  constexpr double tau = 2.0 * std::numbers::pi;
  CMat w(t, t);
  for (int i = 0; i < t; ++i)
    for (int r = 0; r < t; ++r) w(i, r) = std::polar(1.0, -tau * double((i * r) % t) / double(t));
  if (axis == Axis::Z1) {
    Mat fold = Mat::Zero(t, N);
    for (int m = 0; m < M; ++m) fold.row(m % t) += plane.row(m);
    return w * fold.cast<cplx>();  // t x N, rows are slices
  }
  Mat fold = Mat::Zero(M, t);
  for (int n = 0; n < N; ++n) fold.col(n % t) += plane.col(n);
  return fold.cast<cplx>() * w;  // M x t, columns are slices (w symmetric)
}

namespace detail {

CMat axis_spectrum_half(const Mat& plane, Axis axis) {
  const int M = int(plane.rows()), N = int(plane.cols());
  require(M >= 1 && N >= 1, Errc::invalid_argument, "axis_spectrum_half needs a nonempty plane");
  if (axis == Axis::Z1) {
    const int half = M / 2 + 1;
    fftw_plan plan = cache().get({PlanKind::r2c_cols, M, N});
    RealBuf in(size_t(M) * N);
    ComplexBuf out(size_t(half) * N);
    std::memcpy(in.p, plane.data(), sizeof(double) * size_t(M) * N);
    fftw_execute_dft_r2c(plan, in.p, out.p);
    CMat y(half, N);
    std::memcpy(y.data(), out.p, sizeof(cplx) * size_t(half) * N);
    return y;
  }
  const int half = N / 2 + 1;
  fftw_plan plan = cache().get({PlanKind::r2c_rows, M, N});
  RealBuf in(size_t(M) * N);
  ComplexBuf out(size_t(M) * half);
  std::memcpy(in.p, plane.data(), sizeof(double) * size_t(M) * N);
  fftw_execute_dft_r2c(plan, in.p, out.p);
  CMat y(M, half);
  std::memcpy(y.data(), out.p, sizeof(cplx) * size_t(M) * half);
  return y;
}

CMat fft2_real_half(const Mat& x, int* full_rows) {
  const int M = int(x.rows()), N = int(x.cols());
  require(M >= 1 && N >= 1, Errc::invalid_argument, "fft2 needs a nonempty array");
  const int half = M / 2 + 1;
  fftw_plan plan = cache().get({PlanKind::r2c_2d, M, N});
  RealBuf in(size_t(M) * N);
  ComplexBuf out(size_t(half) * N);
  std::memcpy(in.p, x.data(), sizeof(double) * size_t(M) * N);
  fftw_execute_dft_r2c(plan, in.p, out.p);
  if (full_rows) *full_rows = M;
  CMat y(half, N);
  std::memcpy(y.data(), out.p, sizeof(cplx) * size_t(half) * N);
  return y;
}

Mat ifft2_real_half(const CMat& halfspec, int full_rows) {
  const int M = full_rows, N = int(halfspec.cols());
  const int half = M / 2 + 1;
  require(int(halfspec.rows()) == half, Errc::invalid_argument, "half spectrum has wrong height");
  fftw_plan plan = cache().get({PlanKind::c2r_2d, M, N});
  ComplexBuf in(size_t(half) * N);
  RealBuf out(size_t(M) * N);
  std::memcpy(in.p, halfspec.data(), sizeof(cplx) * size_t(half) * N);
  fftw_execute_dft_c2r(plan, in.p, out.p);
  Mat y(M, N);
  std::memcpy(y.data(), out.p, sizeof(double) * size_t(M) * N);
  y /= double(M) * double(N);
  return y;
}

int friendly_size(int n) {
  require(n >= 1, Errc::invalid_argument, "extent must be positive");
  for (int m = n;; ++m) {
    int r = m;
    for (int f : {2, 3, 5, 7})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

}  // namespace detail
}  // namespace cbp
