#include "core/propagation.hpp"

#include <cmath>
#include <string>

#include "core/fft.hpp"

namespace vaporstore {

namespace {

constexpr double kPi = 3.14159265358979323846;
// exp(-x) underflows past x ~ 745; image terms beyond that contribute nothing.
constexpr double kExpCutoff = 745.0;

std::vector<double> alias_summed_multiplier(int n, double pitch, double dtau) {
  std::vector<double> mult(static_cast<std::size_t>(n), 1.0);
  if (dtau == 0.0) return mult;
  double period = 2.0 * kPi / pitch;  // reciprocal-lattice period
  int images = static_cast<int>(std::ceil(std::sqrt(kExpCutoff / dtau) / period)) + 1;

  auto theta = [&](double k) {
    double sum = 0.0;
    for (int m = -images; m <= images; ++m) {
      double q = k + m * period;
      double arg = dtau * q * q;
      if (arg < kExpCutoff) sum += std::exp(-arg);
    }
    return sum;
  };

  double norm = theta(0.0);
  for (int j = 0; j < n; ++j) {
    int jj = j <= n / 2 ? j : j - n;
    double k = 2.0 * kPi * jj / (n * pitch);
    mult[j] = theta(k) / norm;
  }
  return mult;
}

std::vector<double> periodized_gaussian(int n, double pitch, double dtau) {
  std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
  if (dtau == 0.0) {
    weights[0] = 1.0 / pitch;
    return weights;
  }
  double length = n * pitch;
  int images = static_cast<int>(std::ceil(2.0 * std::sqrt(kExpCutoff * dtau) / length)) + 1;

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    int ii = i <= n / 2 ? i : i - n;
    double d = ii * pitch;
    double sum = 0.0;
    for (int m = -images; m <= images; ++m) {
      double r = d + m * length;
      double arg = r * r / (4.0 * dtau);
      if (arg < kExpCutoff) sum += std::exp(-arg);
    }
    weights[i] = sum;
    total += sum;
  }
  // Renormalize so the discrete density integrates to exactly one.
  for (double& w : weights) w /= total * pitch;
  return weights;
}

void check_field(const ComplexField& field) {
  field.grid.validate();
  if (field.values.size() != field.grid.npixels())
    fail(ErrorCode::shape, "field value count does not match its grid");
}

void check_tau(double tau, bool allow_zero) {
  if (!std::isfinite(tau) || tau < 0.0 || (!allow_zero && tau == 0.0))
    fail(ErrorCode::domain, "storage duration must be " + std::string(allow_zero ? ">= 0" : "> 0"));
}

}  // namespace

void MediumParams::validate() const {
  if (!std::isfinite(diffusion) || diffusion < 0.0)
    fail(ErrorCode::domain, "diffusion coefficient must be finite and >= 0");
  if (!std::isfinite(decay_rate) || decay_rate < 0.0)
    fail(ErrorCode::domain, "decay rate must be finite and >= 0");
}

double blur_sigma(const MediumParams& medium, double tau) {
  medium.validate();
  check_tau(tau, true);
  return std::sqrt(2.0 * medium.diffusion * tau);
}

DiffusionKernel make_diffusion_kernel(const GridSpec& grid, const MediumParams& medium, double tau) {
  grid.validate();
  medium.validate();
  check_tau(tau, true);
  double dtau = medium.diffusion * tau;
  DiffusionKernel k;
  k.tau = tau;
  k.diffusion = medium.diffusion;
  k.multiplier_x = alias_summed_multiplier(grid.nx, grid.pitch, dtau);
  k.multiplier_y = grid.ny == grid.nx ? k.multiplier_x : alias_summed_multiplier(grid.ny, grid.pitch, dtau);
  k.kernel_x = periodized_gaussian(grid.nx, grid.pitch, dtau);
  k.kernel_y = grid.ny == grid.nx ? k.kernel_x : periodized_gaussian(grid.ny, grid.pitch, dtau);
  return k;
}

ComplexField propagate_storage(const ComplexField& field, const MediumParams& medium, double tau) {
  check_field(field);
  medium.validate();
  check_tau(tau, true);
  if (tau == 0.0) return field;

  DiffusionKernel kernel = make_diffusion_kernel(field.grid, medium, tau);
  int nx = field.grid.nx;
  int ny = field.grid.ny;
  ComplexField out{field.grid, field.values, field.timestamp + tau};
  fft::forward2d(out.values.data(), nx, ny);
  double decay = std::exp(-0.5 * medium.decay_rate * tau);
  for (int iy = 0; iy < ny; ++iy) {
    double my = decay * kernel.multiplier_y[iy];
    cplx* row = out.values.data() + static_cast<std::size_t>(iy) * nx;
    for (int ix = 0; ix < nx; ++ix) row[ix] *= my * kernel.multiplier_x[ix];
  }
  fft::inverse2d(out.values.data(), nx, ny);
  return out;
}

ComplexField propagate_storage_direct_window(const ComplexField& field, const MediumParams& medium,
                                             double tau, int x0, int y0, int width, int height) {
  check_field(field);
  medium.validate();
  check_tau(tau, false);
  int nx = field.grid.nx;
  int ny = field.grid.ny;
  if (width < 1 || height < 1 || x0 < 0 || y0 < 0 || x0 + width > nx || y0 + height > ny)
    fail(ErrorCode::domain, "output window falls outside the grid");

  DiffusionKernel kernel = make_diffusion_kernel(field.grid, medium, tau);
  std::vector<double> wx(nx), wy(ny);  // dimensionless circular weights
  for (int i = 0; i < nx; ++i) wx[i] = kernel.kernel_x[i] * field.grid.pitch;
  for (int i = 0; i < ny; ++i) wy[i] = kernel.kernel_y[i] * field.grid.pitch;
  double decay = std::exp(-0.5 * medium.decay_rate * tau);

  ComplexField out{GridSpec{width, height, field.grid.pitch},
                   std::vector<cplx>(static_cast<std::size_t>(width) * height),
                   field.timestamp + tau};

  std::vector<double> wrow(nx);
  for (int ox = 0; ox < width; ++ox) {
    int gx = x0 + ox;
    for (int ix = 0; ix < nx; ++ix) {
      int dx = gx - ix;
      if (dx < 0) dx += nx;
      wrow[ix] = wx[dx];
    }
    for (int oy = 0; oy < height; ++oy) {
      int gy = y0 + oy;
      cplx acc = 0.0;
      for (int iy = 0; iy < ny; ++iy) {
        int dy = gy - iy;
        if (dy < 0) dy += ny;
        double wyv = wy[dy];
        if (wyv == 0.0) continue;
        const cplx* row = field.values.data() + static_cast<std::size_t>(iy) * nx;
        cplx along = 0.0;
        for (int ix = 0; ix < nx; ++ix) along += row[ix] * wrow[ix];
        acc += wyv * along;
      }
      out.at(ox, oy) = decay * acc;
    }
  }
  return out;
}

ComplexField propagate_storage_direct(const ComplexField& field, const MediumParams& medium, double tau) {
  return propagate_storage_direct_window(field, medium, tau, 0, 0, field.grid.nx, field.grid.ny);
}

void require_padding(const GridSpec& grid, const PixelBox& box, double sigma_max) {
  if (box.empty()) return;
  double want_x = (box.max_x - box.min_x + 1) * grid.pitch + 8.0 * sigma_max;
  double want_y = (box.max_y - box.min_y + 1) * grid.pitch + 8.0 * sigma_max;
  if (grid.extent_x() <= want_x || grid.extent_y() <= want_y)
    fail(ErrorCode::config,
         "grid extent " + std::to_string(grid.extent_x()) + " m x " + std::to_string(grid.extent_y()) +
             " m leaves less than 8 sigma of padding around the target (needs > " +
             std::to_string(want_x) + " m x " + std::to_string(want_y) + " m)");
}

}  // namespace vaporstore
