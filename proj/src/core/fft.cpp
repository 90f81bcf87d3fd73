#include "core/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace vaporstore::fft {

namespace {

// Plans are cached per (nx, ny, sign) for the process lifetime and reused on
// caller buffers through the new-array interface. FFTW_ESTIMATE keeps planning
// deterministic, FFTW_UNALIGNED keeps the plans valid for any caller buffer.
class PlanCache {
 public:
  fftw_plan get(int nx, int ny, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(nx, ny, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(nx) * ny);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(ny, nx, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::complex<double>* data, int nx, int ny, int sign) {
  fftw_plan plan = cache().get(nx, ny, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward2d(std::complex<double>* data, int nx, int ny) { execute(data, nx, ny, FFTW_FORWARD); }

void inverse2d(std::complex<double>* data, int nx, int ny) {
  execute(data, nx, ny, FFTW_BACKWARD);
  double scale = 1.0 / (static_cast<double>(nx) * ny);
  std::size_t n = static_cast<std::size_t>(nx) * ny;
  for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
}

}  // namespace vaporstore::fft
