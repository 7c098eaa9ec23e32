#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kpf {

using cplx = std::complex<double>;

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

enum class Exec { serial, parallel };

Exec default_exec();
void set_default_exec(Exec mode);

// Reads KPF_THREADS and caps the OpenMP worker count. Safe to call without OpenMP.
void apply_thread_env();

namespace detail {
// Chunk size is fixed so the reduction order never depends on the thread count.
inline constexpr std::size_t kReduceChunk = 1024;
}  // namespace detail

// Deterministic sum of term(i) for i in [0, n).
//
// Parallel mode computes per-chunk compensated partials and combines them in
// chunk order, so repeated runs are bit-identical for any worker count. The
// serial mode is the plain reference loop kept for testing and benchmarks.
template <class Term>
double indexed_sum(std::size_t n, Term&& term, Exec mode = default_exec()) {
  const std::size_t nchunks = (n + detail::kReduceChunk - 1) / detail::kReduceChunk;
  if (mode == Exec::serial || nchunks < 2) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(term(i));
    return acc.value();
  }
  std::vector<double> part(nchunks), carry(nchunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * detail::kReduceChunk;
    const std::size_t hi = std::min(n, lo + detail::kReduceChunk);
    CompensatedSum acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
    part[static_cast<std::size_t>(c)] = acc.sum;
    carry[static_cast<std::size_t>(c)] = acc.comp;
  }
  CompensatedSum acc;
  for (std::size_t c = 0; c < nchunks; ++c) {
    acc.add(part[c]);
    acc.add(carry[c]);
  }
  return acc.value();
}

// Complex variant; real and imaginary parts carry their own compensation.
template <class Term>
cplx indexed_sum_cplx(std::size_t n, Term&& term, Exec mode = default_exec()) {
  const std::size_t nchunks = (n + detail::kReduceChunk - 1) / detail::kReduceChunk;
  if (mode == Exec::serial || nchunks < 2) {
    CompensatedSum re, im;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx v = term(i);
      re.add(v.real());
      im.add(v.imag());
    }
    return {re.value(), im.value()};
  }
  std::vector<cplx> part(nchunks), carry(nchunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * detail::kReduceChunk;
    const std::size_t hi = std::min(n, lo + detail::kReduceChunk);
    CompensatedSum re, im;
    for (std::size_t i = lo; i < hi; ++i) {
      const cplx v = term(i);
      re.add(v.real());
      im.add(v.imag());
    }
    part[static_cast<std::size_t>(c)] = {re.sum, im.sum};
    carry[static_cast<std::size_t>(c)] = {re.comp, im.comp};
  }
  CompensatedSum re, im;
  for (std::size_t c = 0; c < nchunks; ++c) {
    re.add(part[c].real());
    re.add(carry[c].real());
    im.add(part[c].imag());
    im.add(carry[c].imag());
  }
  return {re.value(), im.value()};
}

// Shared slot for reporting a bad evaluation out of a parallel region
// (exceptions must not cross the omp boundary). Keeps the lexicographically
// smallest location so the report is run-to-run stable.
class ErrorSlot {
 public:
  void report(double x, double y) {
    std::lock_guard<std::mutex> lock(m_);
    if (!bad_ || y < y_ || (y == y_ && x < x_)) {
      bad_ = true;
      x_ = x;
      y_ = y;
    }
  }
  bool bad() const { return bad_; }
  void raise_if_bad() const;

 private:
  mutable std::mutex m_;
  bool bad_ = false;
  double x_ = 0.0;
  double y_ = 0.0;
};

}  // namespace kpf
