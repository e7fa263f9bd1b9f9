#include "evanescent/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "evanescent/constants.hpp"

namespace evanescent {
namespace {

constexpr double kActionRelTol = 1e-8;

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

// Composite Simpson with panel doubling until successive refinements agree
// to rel_tol. The integrand is smooth inside each call; a square-root zero
// at one endpoint converges like n^-1.5, hence the generous doubling cap.
double simpson_refine(const std::function<double(double)>& f, double a,
                      double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  auto composite = [&](int panels) {
    const double h = (b - a) / panels;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < panels; i += 2) odd += f(a + i * h);
    for (int i = 2; i < panels; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
  };
  int panels = 8;
  double prev = composite(panels);
  for (int round = 0; round < 18; ++round) {
    panels *= 2;
    const double cur = composite(panels);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-300) return cur;
    prev = cur;
  }
  return prev;
}

struct ForbiddenPiece {
  double a, b;       // sub-interval of one sample span
  double v_a, v_b;   // potential at the endpoints
};

// Closed intervals where the piecewise-linear potential exceeds the energy.
std::vector<ForbiddenPiece> forbidden_pieces_sampled(
    const std::vector<ProfileSample>& samples, double energy) {
  std::vector<ForbiddenPiece> pieces;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double xa = samples[i].x_m, xb = samples[i + 1].x_m;
    const double fa = samples[i].potential_j - energy;
    const double fb = samples[i + 1].potential_j - energy;
    if (fa > 0.0 && fb > 0.0) {
      pieces.push_back({xa, xb, samples[i].potential_j, samples[i + 1].potential_j});
    } else if (fa > 0.0 && fb <= 0.0) {
      const double xc = xa + fa / (fa - fb) * (xb - xa);
      if (xc > xa) pieces.push_back({xa, xc, samples[i].potential_j, energy});
    } else if (fa <= 0.0 && fb > 0.0) {
      const double xc = xa + fa / (fa - fb) * (xb - xa);
      if (xb > xc) pieces.push_back({xc, xb, energy, samples[i + 1].potential_j});
    }
  }
  return pieces;
}

// Boundaries of maximal runs of contiguous forbidden pieces.
std::vector<double> merge_boundaries(const std::vector<ForbiddenPiece>& pieces) {
  std::vector<double> boundaries;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i == 0 || pieces[i].a != pieces[i - 1].b) boundaries.push_back(pieces[i].a);
    if (i + 1 == pieces.size() || pieces[i + 1].a != pieces[i].b)
      boundaries.push_back(pieces[i].b);
  }
  return boundaries;
}

}  // namespace

BarrierProfile BarrierProfile::piecewise(std::vector<BarrierSegment> segments,
                                         double mass_kg) {
  require(mass_kg > 0.0 && std::isfinite(mass_kg),
          "BarrierProfile: mass must be positive and finite");
  require(!segments.empty(), "BarrierProfile: at least one segment required");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    require(std::isfinite(s.start_m) && std::isfinite(s.end_m) &&
                std::isfinite(s.potential_j),
            "BarrierProfile: segment values must be finite");
    require(s.end_m > s.start_m, "BarrierProfile: segment end must exceed start");
    if (i > 0) {
      require(s.start_m >= segments[i - 1].end_m,
              "BarrierProfile: segments must be ordered and non-overlapping");
    }
  }
  BarrierProfile profile(Kind::piecewise_constant, mass_kg);
  profile.segments_ = std::move(segments);
  return profile;
}

BarrierProfile BarrierProfile::sampled(std::vector<ProfileSample> samples,
                                       double mass_kg) {
  require(mass_kg > 0.0 && std::isfinite(mass_kg),
          "BarrierProfile: mass must be positive and finite");
  require(samples.size() >= 2, "BarrierProfile: at least two samples required");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(std::isfinite(samples[i].x_m) && std::isfinite(samples[i].potential_j),
            "BarrierProfile: sample values must be finite");
    if (i > 0) {
      require(samples[i].x_m > samples[i - 1].x_m,
              "BarrierProfile: sample positions must be strictly increasing");
    }
  }
  BarrierProfile profile(Kind::sampled, mass_kg);
  profile.samples_ = std::move(samples);
  return profile;
}

double BarrierProfile::x_min_m() const {
  return kind_ == Kind::piecewise_constant ? segments_.front().start_m
                                           : samples_.front().x_m;
}

double BarrierProfile::x_max_m() const {
  return kind_ == Kind::piecewise_constant ? segments_.back().end_m
                                           : samples_.back().x_m;
}

WkbResult wkb_action(const BarrierProfile& profile, double energy_j) {
  require(std::isfinite(energy_j), "wkb_action: energy must be finite");
  const double mass = profile.mass_kg();
  const double hbar = kCodata2018.hbar;

  double action = 0.0;
  std::vector<double> turning_points;

  if (profile.kind() == BarrierProfile::Kind::piecewise_constant) {
    // Expand to a contiguous span list, filling inter-segment gaps with V = 0,
    // then sum kappa * width in closed form over the forbidden spans.
    std::vector<ForbiddenPiece> forbidden;
    const auto& segs = profile.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (i > 0 && segs[i].start_m > segs[i - 1].end_m && 0.0 > energy_j) {
        forbidden.push_back({segs[i - 1].end_m, segs[i].start_m, 0.0, 0.0});
      }
      if (segs[i].potential_j > energy_j) {
        forbidden.push_back(
            {segs[i].start_m, segs[i].end_m, segs[i].potential_j, segs[i].potential_j});
      }
    }
    for (const auto& piece : forbidden) {
      const double kappa =
          std::sqrt(2.0 * mass * (piece.v_a - energy_j)) / hbar;
      action += kappa * (piece.b - piece.a);
    }
    turning_points = merge_boundaries(forbidden);
  } else {
    const auto pieces = forbidden_pieces_sampled(profile.samples(), energy_j);
    for (const auto& piece : pieces) {
      const double slope = (piece.v_b - piece.v_a) / (piece.b - piece.a);
      auto integrand = [&](double x) {
        const double gap = piece.v_a + slope * (x - piece.a) - energy_j;
        return gap > 0.0 ? std::sqrt(2.0 * mass * gap) / hbar : 0.0;
      };
      action += simpson_refine(integrand, piece.a, piece.b, kActionRelTol);
    }
    turning_points = merge_boundaries(pieces);
  }

  WkbResult result;
  result.action = action;
  result.log_amplitude = action == 0.0 ? 0.0 : -action;
  result.turning_points_m = std::move(turning_points);
  return result;
}

double wkb_log_transmission(const BarrierProfile& profile, double energy_j) {
  const double action = wkb_action(profile, energy_j).action;
  return action == 0.0 ? 0.0 : -2.0 * action;
}

}  // namespace evanescent
