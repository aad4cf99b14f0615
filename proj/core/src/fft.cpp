#include "lrtc/fft.hpp"

#include <cmath>
#include <mutex>

#include <fftw3.h>

namespace lrtc {

namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

DenseTensor transform(const DenseTensor& in, int sign) {
  DenseTensor out = in;
  const auto& dims = in.shape().dims();
  std::vector<int> n(dims.begin(), dims.end());
  auto* buf = reinterpret_cast<fftw_complex*>(out.data().data());

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("FFTW could not plan a transform for shape " + in.shape().to_string());
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  out *= 1.0 / std::sqrt(static_cast<double>(in.size()));
  return out;
}

}  // namespace

DenseTensor fft_forward(const DenseTensor& t) { return transform(t, FFTW_FORWARD); }

DenseTensor fft_inverse(const DenseTensor& t) { return transform(t, FFTW_BACKWARD); }

}  // namespace lrtc
