#include "uhlfid/threads.hpp"

#include <algorithm>
#include <atomic>

#include <Eigen/Core>

#ifdef UHLFID_HAVE_OPENBLAS_THREADS
extern "C" void openblas_set_num_threads(int num_threads);
#endif

namespace uhlfid {

namespace {
std::atomic<int> requested_threads{1};
}

bool set_backend_threads(int threads) {
  threads = std::max(1, threads);
  requested_threads = threads;
  Eigen::setNbThreads(threads);
#ifdef UHLFID_HAVE_OPENBLAS_THREADS
  openblas_set_num_threads(threads);
  return true;
#else
  return false;
#endif
}

int backend_threads() { return requested_threads; }

}  // namespace uhlfid
