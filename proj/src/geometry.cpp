#include "kpf/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace kpf {

namespace {
void check_cuts(const std::vector<double>& cuts) {
  if (cuts.size() < 2) throw ValidationError("partition needs at least one cell");
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (!(cuts[i] < cuts[i + 1]))
      throw ValidationError("partition cuts must be strictly increasing");
}
}  // namespace

GridPartition GridPartition::uniform(const Rect2& r, std::size_t nx, std::size_t ny) {
  validate_compact(r);
  GridPartition p;
  p.x_cuts.resize(nx + 1);
  p.y_cuts.resize(ny + 1);
  for (std::size_t i = 0; i <= nx; ++i)
    p.x_cuts[i] = r.x_lo + (r.x_hi - r.x_lo) * static_cast<double>(i) / static_cast<double>(nx);
  for (std::size_t j = 0; j <= ny; ++j)
    p.y_cuts[j] = r.y_lo + (r.y_hi - r.y_lo) * static_cast<double>(j) / static_cast<double>(ny);
  p.x_cuts.back() = r.x_hi;
  p.y_cuts.back() = r.y_hi;
  return p;
}

GridPartition GridPartition::from_cuts(std::vector<double> xs, std::vector<double> ys) {
  check_cuts(xs);
  check_cuts(ys);
  GridPartition p;
  p.x_cuts = std::move(xs);
  p.y_cuts = std::move(ys);
  return p;
}

GridPartition GridPartition::refined() const {
  auto split = [](const std::vector<double>& cuts) {
    std::vector<double> out;
    out.reserve(cuts.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      out.push_back(cuts[i]);
      out.push_back(0.5 * (cuts[i] + cuts[i + 1]));
    }
    out.push_back(cuts.back());
    return out;
  };
  GridPartition p;
  p.x_cuts = split(x_cuts);
  p.y_cuts = split(y_cuts);
  return p;
}

std::vector<double> build_cuts(double a, double b, const std::vector<double>& seeds,
                               double max_step) {
  if (!(a < b)) throw ValidationError("build_cuts: empty interval");
  std::vector<double> base{a, b};
  for (double s : seeds)
    if (s > a && s < b) base.push_back(s);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());

  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const double lo = base[i], hi = base[i + 1];
    out.push_back(lo);
    if (std::isfinite(max_step) && max_step > 0.0) {
      const auto splits =
          static_cast<std::size_t>(std::ceil((hi - lo) / max_step - 1e-12));
      for (std::size_t k = 1; k < splits; ++k)
        out.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(splits));
    }
  }
  out.push_back(b);
  // Guard against duplicates introduced by the uniform fill landing on a seed.
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace kpf
