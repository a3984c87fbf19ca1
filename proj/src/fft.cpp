#include "kgl/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace kgl::fft {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (shape, direction) under a lock and
// kept for the life of the process.
class PlanCache {
 public:
  fftw_plan get(const TorusGrid& grid, int sign) {
    std::array<int, 3> n{1, 1, 1};
    for (int a = 0; a < grid.dim(); ++a) n[a] = grid.points(a);
    const auto key = std::make_tuple(grid.dim(), n[0], n[1], n[2], sign);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftw_complex> scratch(grid.size());
    fftw_plan plan = fftw_plan_dft(grid.dim(), n.data(), scratch.data(), scratch.data(), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_complex* as_fftw(std::span<cplx> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

}  // namespace

void forward(const TorusGrid& grid, std::span<cplx> data) {
  fftw_execute_dft(cache().get(grid, FFTW_FORWARD), as_fftw(data), as_fftw(data));
}

void inverse(const TorusGrid& grid, std::span<cplx> data) {
  fftw_execute_dft(cache().get(grid, FFTW_BACKWARD), as_fftw(data), as_fftw(data));
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& z : data) z *= scale;
}

}  // namespace kgl::fft
