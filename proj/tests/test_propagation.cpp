#include <doctest.h>

#include <cmath>

#include "core/propagation.hpp"
#include "helpers.hpp"

using namespace vaporstore;
using testutil::error_code_of;
using testutil::max_abs_diff;
using testutil::random_field;

namespace {

const MediumParams kMedium{1e-3, 14000.0};  // 10 cm^2/s, Gamma = 14000/s
constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("blur sigma follows sqrt(2 D tau)") {
  CHECK(blur_sigma(kMedium, 2e-6) == doctest::Approx(63.245553e-6).epsilon(1e-6));
  CHECK(blur_sigma(kMedium, 30e-6) == doctest::Approx(244.9489743e-6).epsilon(1e-9));
  CHECK(blur_sigma(kMedium, 0.0) == 0.0);
  CHECK(blur_sigma(MediumParams{0.0, 14000.0}, 30e-6) == 0.0);
}

TEST_CASE("zero duration is the identity, negative duration a domain error") {
  ComplexField f = random_field(GridSpec{32, 32, 1e-5}, 101);
  ComplexField out = propagate_storage(f, kMedium, 0.0);
  CHECK(max_abs_diff(f, out) == 0.0);
  CHECK(out.timestamp == f.timestamp);
  CHECK(error_code_of([&] { propagate_storage(f, kMedium, -1e-6); }) == ErrorCode::domain);
  CHECK(error_code_of([&] { propagate_storage_direct(f, kMedium, 0.0); }) == ErrorCode::domain);
  CHECK(error_code_of([&] { propagate_storage_direct(f, kMedium, -1e-6); }) == ErrorCode::domain);
}

TEST_CASE("timestamps accumulate across propagation steps") {
  ComplexField f = random_field(GridSpec{32, 32, 1e-5}, 5);
  ComplexField out = propagate_storage(propagate_storage(f, kMedium, 2e-6), kMedium, 3e-6);
  CHECK(out.timestamp == doctest::Approx(5e-6).epsilon(1e-12));
}

TEST_CASE("uniform fields only decay") {
  GridSpec grid{32, 32, 1e-5};
  ComplexField f = make_field(grid);
  for (cplx& v : f.values) v = cplx(0.7, -0.2);
  double tau = 1e-5;
  ComplexField out = propagate_storage(f, kMedium, tau);
  cplx want = cplx(0.7, -0.2) * std::exp(-0.5 * kMedium.decay_rate * tau);
  for (const cplx& v : out.values) CHECK(std::abs(v - want) < 1e-12);
}

TEST_CASE("a point source spreads to the sampled Gaussian peak") {
  GridSpec grid{64, 64, 1e-5};
  MediumParams no_decay{1e-3, 0.0};
  ComplexField f = make_field(grid);
  f.at(32, 32) = 1.0;
  // sigma = 5 px; peak of the 2D sampled kernel is 1 / (2 pi * 25) in pixel units
  double tau = 25.0 * grid.pitch * grid.pitch / (2.0 * no_decay.diffusion);
  ComplexField out = propagate_storage_direct(f, no_decay, tau);
  CHECK(out.at(32, 32).real() == doctest::Approx(1.0 / (2.0 * kPi * 25.0)).epsilon(1e-6));
  CHECK(std::abs(out.at(32, 32).imag()) < 1e-18);
}

TEST_CASE("fft route matches the direct sum at round-off level") {
  GridSpec grid{32, 32, 1e-5};
  for (double sigma_px : {1.0, 3.0, 7.0}) {
    double sigma = sigma_px * grid.pitch;
    double tau = sigma * sigma / (2.0 * kMedium.diffusion);
    ComplexField f = random_field(grid, 900 + static_cast<unsigned>(sigma_px));
    ComplexField fast = propagate_storage(f, kMedium, tau);
    ComplexField slow = propagate_storage_direct(f, kMedium, tau);
    CHECK(max_abs_diff(fast, slow) < 1e-10);
  }
}

TEST_CASE("direct-sum window agrees with the fft route on a stored target") {
  GridSpec grid{512, 512, 10e-6};
  Target target = make_lines_target(LinesGeometry{3, 340e-6, 340e-6, 2e-3}, grid);
  ComplexField early = propagate_storage(target.field, kMedium, 2e-6);

  double tau = 28e-6;  // carry the 2 us frame to 30 us total
  ComplexField fast = propagate_storage(early, kMedium, tau);
  ComplexField window = propagate_storage_direct_window(early, kMedium, tau, 224, 224, 64, 64);

  double worst = 0.0;
  for (int oy = 0; oy < 64; ++oy)
    for (int ox = 0; ox < 64; ++ox)
      worst = std::max(worst, std::abs(window.at(ox, oy) - fast.at(224 + ox, 224 + oy)));
  CHECK(worst < 1e-10);
  CHECK(window.timestamp == doctest::Approx(30e-6).epsilon(1e-12));
}

TEST_CASE("propagation composes: two legs equal one combined leg") {
  GridSpec grid{128, 128, 1e-5};
  ComplexField f = random_field(grid, 314);
  SUBCASE("2 us then 8 us") {
    ComplexField two = propagate_storage(propagate_storage(f, kMedium, 2e-6), kMedium, 8e-6);
    ComplexField one = propagate_storage(f, kMedium, 10e-6);
    CHECK(max_abs_diff(two, one) < 1e-8);
  }
  SUBCASE("10 us then 20 us") {
    ComplexField two = propagate_storage(propagate_storage(f, kMedium, 10e-6), kMedium, 20e-6);
    ComplexField one = propagate_storage(f, kMedium, 30e-6);
    CHECK(max_abs_diff(two, one) < 1e-8);
  }
}

TEST_CASE("dc component decays by exactly the amplitude factor") {
  GridSpec grid{64, 64, 1e-5};
  ComplexField f = random_field(grid, 77);
  double tau = 30e-6;
  cplx before = dc_component(f);
  cplx after = dc_component(propagate_storage(f, kMedium, tau));
  double want = std::exp(-0.5 * kMedium.decay_rate * tau);  // e^{-0.21} = 0.8105842
  CHECK(std::abs(after / before - want) < 1e-9 * want);
}

TEST_CASE("propagation is linear") {
  GridSpec grid{64, 64, 1e-5};
  ComplexField a = random_field(grid, 1);
  ComplexField b = random_field(grid, 2);
  cplx alpha(0.8, 0.1), beta(-0.4, 1.2);
  ComplexField mix = make_field(grid);
  for (std::size_t i = 0; i < mix.values.size(); ++i)
    mix.values[i] = alpha * a.values[i] + beta * b.values[i];

  double tau = 8e-6;
  ComplexField lhs = propagate_storage(mix, kMedium, tau);
  ComplexField pa = propagate_storage(a, kMedium, tau);
  ComplexField pb = propagate_storage(b, kMedium, tau);
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i)
    worst = std::max(worst, std::abs(lhs.values[i] - (alpha * pa.values[i] + beta * pb.values[i])));
  CHECK(worst < 1e-10);
}

TEST_CASE("without decay the field sum is conserved and energy never grows") {
  GridSpec grid{64, 64, 1e-5};
  MediumParams no_decay{1e-3, 0.0};
  ComplexField f = make_field(grid);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (cplx& v : f.values) v = dist(rng);

  ComplexField out = propagate_storage(f, no_decay, 2e-5);
  cplx sum_before = 0.0, sum_after = 0.0;
  double energy_before = 0.0, energy_after = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    sum_before += f.values[i];
    sum_after += out.values[i];
    energy_before += std::norm(f.values[i]);
    energy_after += std::norm(out.values[i]);
  }
  CHECK(std::abs(sum_after - sum_before) < 1e-9 * std::abs(sum_before));
  CHECK(energy_after <= energy_before * (1.0 + 1e-12));
}

TEST_CASE("opposite-phase half planes keep an exact null on the midline") {
  GridSpec grid{33, 32, 1e-5};  // odd width puts a column at x = 0
  ComplexField f = make_field(grid);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix)
      f.at(ix, iy) = grid.x(ix) > 0 ? 1.0 : (grid.x(ix) < 0 ? -1.0 : 0.0);

  for (double tau : {2e-6, 10e-6, 30e-6}) {
    ComplexField fast = propagate_storage(f, kMedium, tau);
    ComplexField slow = propagate_storage_direct(f, kMedium, tau);
    for (int iy = 0; iy < grid.ny; ++iy) {
      CHECK(std::abs(fast.at(16, iy)) < 1e-14);
      CHECK(std::abs(slow.at(16, iy)) < 1e-14);
    }
  }
}

TEST_CASE("multiplier and kernel invariants hold") {
  GridSpec grid{96, 64, 1e-5};
  DiffusionKernel k = make_diffusion_kernel(grid, kMedium, 7e-6);
  CHECK(k.multiplier_x.size() == 96);
  CHECK(k.multiplier_y.size() == 64);
  CHECK(k.multiplier_x[0] == 1.0);
  CHECK(k.multiplier_y[0] == 1.0);
  for (int j = 1; j <= 48; ++j) {
    CHECK(k.multiplier_x[j] > 0.0);
    CHECK(k.multiplier_x[j] <= k.multiplier_x[j - 1]);  // falls away from dc
  }

  double sum_x = 0.0, sum_y = 0.0;
  for (double w : k.kernel_x) {
    CHECK(w >= 0.0);
    sum_x += w;
  }
  for (double w : k.kernel_y) sum_y += w;
  CHECK(sum_x * grid.pitch == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sum_y * grid.pitch == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("padding guard rejects targets without 8 sigma of headroom") {
  GridSpec grid{512, 512, 10e-6};
  Target t = make_lines_target(LinesGeometry{3, 340e-6, 340e-6, 2e-3}, grid);
  PixelBox box = label_bbox(t.labels);
  CHECK_NOTHROW(require_padding(grid, box, blur_sigma(kMedium, 30e-6)));
  // 60 us of diffusion wants 1700 + 8 * 346 um > 4.4 mm of x extent... still fits;
  // 170 us pushes past the 5.12 mm extent
  CHECK(error_code_of([&] { require_padding(grid, box, blur_sigma(kMedium, 170e-6)); }) ==
        ErrorCode::config);
}

TEST_CASE("bad medium parameters are domain errors") {
  ComplexField f = random_field(GridSpec{32, 32, 1e-5}, 3);
  CHECK(error_code_of([&] { propagate_storage(f, MediumParams{-1e-3, 0.0}, 1e-6); }) ==
        ErrorCode::domain);
  CHECK(error_code_of([&] { propagate_storage(f, MediumParams{1e-3, -5.0}, 1e-6); }) ==
        ErrorCode::domain);
}
