#include "kpf/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace kpf {

PanelLayout PanelLayout::with_shift(double s) const {
  PanelLayout out = *this;
  out.breaks.clear();
  for (double b : breaks) out.breaks.push_back(b - s);
  return out;
}

std::vector<double> panel_edges(double a, double b, const PanelLayout& layout) {
  if (!(a < b)) throw ValidationError("panel_edges: empty interval");

  std::vector<double> seeds;
  for (double br : layout.breaks) {
    if (br < a - layout.grade_span || br > b + layout.grade_span) continue;
    if (br > a && br < b) seeds.push_back(br);
    // Grade into the break even when it sits on (or just past) an endpoint.
    if (layout.grade_hmin > 0.0) {
      for (double h = layout.grade_hmin; h < layout.grade_span; h *= 2.0) {
        if (br - h > a && br - h < b) seeds.push_back(br - h);
        if (br + h > a && br + h < b) seeds.push_back(br + h);
      }
    }
  }
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::vector<double> base{a};
  base.insert(base.end(), seeds.begin(), seeds.end());
  base.push_back(b);

  std::vector<double> out;
  out.reserve(base.size());
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    double lo = base[i];
    const double hi = base[i + 1];
    out.push_back(lo);
    if (layout.rel_width > 0.0) {
      // March with a location-dependent width so 1/t-type factors stay smooth
      // per panel without a uniform fine mesh.
      while (true) {
        const double w = std::min(layout.max_width,
                                  layout.rel_width * std::max(1.0, std::abs(lo)));
        if (lo + w >= hi - 1e-12 * (std::abs(hi) + 1.0)) break;
        lo += w;
        out.push_back(lo);
      }
    } else if (std::isfinite(layout.max_width) && layout.max_width > 0.0) {
      const auto splits = static_cast<std::size_t>(
          std::ceil((hi - lo) / layout.max_width - 1e-12));
      for (std::size_t k = 1; k < splits; ++k)
        out.push_back(lo + (hi - lo) * static_cast<double>(k) /
                               static_cast<double>(splits));
    }
  }
  out.push_back(b);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void SeqAccel::push(cplx partial) {
  const cplx prev_head = head();
  if (static_cast<int>(table_.size()) < max_table_) {
    table_.push_back(partial);
  } else {
    table_.back() = partial;
  }
  for (std::size_t i = table_.size() - 1; i > 0; --i)
    table_[i - 1] = 0.5 * (table_[i - 1] + table_[i]);
  ++count_;
  if (count_ > 1) last_change_ = std::abs(head() - prev_head);
}

}  // namespace kpf
