#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace cornex::detail {

namespace {
std::mutex g_plan_mutex;
}

void fft_axes(cplx* data, const TensorGrid& g, const std::vector<int>& axes, int sign) {
  if (axes.empty()) return;
  std::vector<fftw_iodim> dims, loops;
  std::vector<bool> used(g.dims(), false);
  for (int a : axes) {
    used[a] = true;
    fftw_iodim d;
    d.n = g.axis(a).nodes;
    d.is = d.os = static_cast<int>(g.stride(a));
    dims.push_back(d);
  }
  for (int a = 0; a < g.dims(); ++a) {
    if (used[a]) continue;
    fftw_iodim d;
    d.n = g.axis(a).nodes;
    d.is = d.os = static_cast<int>(g.stride(a));
    loops.push_back(d);
  }
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    plan = fftw_plan_guru_dft(static_cast<int>(dims.size()), dims.data(), static_cast<int>(loops.size()),
                              loops.data(), p, p, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    fftw_destroy_plan(plan);
  }
}

}  // namespace cornex::detail
