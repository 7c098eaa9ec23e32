#include "kpf/reduce.hpp"

#include <cstdlib>

#include "kpf/errors.hpp"

namespace kpf {

namespace {
Exec g_default =
#ifdef _OPENMP
    Exec::parallel;
#else
    Exec::serial;
#endif
}  // namespace

Exec default_exec() { return g_default; }

void set_default_exec(Exec mode) { g_default = mode; }

void apply_thread_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("KPF_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

void ErrorSlot::raise_if_bad() const {
  std::lock_guard<std::mutex> lock(m_);
  if (bad_) throw EvaluationError(x_, y_);
}

}  // namespace kpf
