#include "kpf/funclib.hpp"

#include <cmath>

#include "kpf/bv_core.hpp"
#include "kpf/kp_transform.hpp"
#include "kpf/osc_kernels.hpp"
#include "kpf/quadrature.hpp"

namespace kpf::funclib {

const char* tag_name(ClassTag t) {
  switch (t) {
    case ClassTag::BV_V: return "BV_V";
    case ClassTag::BV_H: return "BV_H";
    case ClassTag::BV_norm0: return "BV_norm0";
    case ClassTag::L1: return "L1";
  }
  return "?";
}

cplx gamma0_oracle(double s) {
  if (s == 0.0) throw ValidationError("gamma0_oracle: s must be nonzero");
  const double a = std::abs(s);
  PanelLayout layout;
  layout.max_width = kPi / (2.0 * a);
  layout.rel_width = 0.25;
  TailSumOptions opt;
  opt.tol = 1e-10;
  opt.max_chunks = 6000;
  const TailSum tail = improper_chunks(
      [a](double t) { return std::exp(cplx(0.0, -a * t)) / t; }, 1.0, kPi / a, layout,
      opt, Exec::serial);
  return s > 0.0 ? tail.value : std::conj(tail.value);
}

void Registry::add(CatalogEntry entry) {
  if (contains(entry.name))
    throw ValidationError("duplicate catalog entry: " + entry.name);

  if (entry.tags.count(ClassTag::BV_norm0) != 0) {
    const bv::DiagnosticsReport rep =
        bv::bv_zero_diagnostics(entry.fn, {4, 8, 16, 32}, 4);
    if (!rep.passed())
      throw ValidationError("entry '" + entry.name +
                            "' fails the vanishing diagnostics claimed by BV_norm0");
    entry.fn.bv0_certified = true;
  }

  if (entry.fn.transform_oracle) {
    kp::TransformOptions opt;
    opt.tol = 1e-4;
    opt.assume_bv0 = true;
    const cplx direct = kp::kpft_direct(entry.fn, 1.0, 1.0, opt).value;
    const cplx claimed = entry.fn.transform_oracle->eval(1.0, 1.0);
    if (std::abs(direct - claimed) > 1e-3)
      throw ValidationError("entry '" + entry.name +
                            "' transform oracle disagrees with the direct transform");
  }

  entries_.push_back(std::move(entry));
}

const CatalogEntry& Registry::get(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  throw ValidationError("unknown catalog entry: " + name);
}

bool Registry::contains(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return true;
  return false;
}

namespace {

TransformOracle factored_oracle(std::function<cplx(double)> fx,
                                std::function<cplx(double)> fy) {
  TransformOracle o;
  o.factor_x = std::move(fx);
  o.factor_y = std::move(fy);
  o.eval = [ox = o.factor_x, oy = o.factor_y](double xi, double eta) {
    return ox(xi) * oy(eta);
  };
  return o;
}

CatalogEntry make_zero() {
  CatalogEntry e;
  e.name = "zero";
  e.note = "identically zero";
  e.fn.eval = [](double, double) { return 0.0; };
  e.fn.separable = {{[](double) { return 0.0; }, [](double) { return 0.0; }}};
  e.fn.known_variation = 0.0;
  e.fn.transform_oracle = factored_oracle([](double) { return cplx(0.0); },
                                          [](double) { return cplx(0.0); });
  e.fn.bv0_certified = true;
  e.tags = {ClassTag::BV_V, ClassTag::BV_H, ClassTag::BV_norm0, ClassTag::L1};
  return e;
}

CatalogEntry make_reciprocal() {
  auto u = [](double t) { return t >= 1.0 ? 1.0 / t : 0.0; };
  CatalogEntry e;
  e.name = "reciprocal";
  e.note = "1/(xy) on x,y >= 1, else 0; BV_norm0 without L1";
  e.fn.eval = [u](double x, double y) { return u(x) * u(y); };
  e.fn.support = Rect2{1.0, kInf, 1.0, kInf};
  e.fn.separable = {{u, u}};
  e.fn.x_breaks = {1.0};
  e.fn.y_breaks = {1.0};
  e.fn.known_variation = 4.0;
  e.fn.quadrant_limit_points = {
      {{2.0, 3.0}, {1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6}},
      {{1.0, 2.0}, {0.5, 0.5, 0.0, 0.0}},
      {{1.0, 1.0}, {1.0, 0.0, 0.0, 0.0}},
  };
  e.fn.transform_oracle =
      factored_oracle([](double s) { return gamma0_oracle(s); },
                      [](double s) { return gamma0_oracle(s); });
  e.tags = {ClassTag::BV_V, ClassTag::BV_H, ClassTag::BV_norm0};
  return e;
}

CatalogEntry make_exp2() {
  auto u = [](double t) { return std::exp(-std::abs(t)); };
  auto fx = [](double s) { return cplx(2.0 / (1.0 + s * s)); };
  CatalogEntry e;
  e.name = "exp2";
  e.note = "exp(-|x|-|y|); L1 with closed-form transform";
  e.fn.eval = [u](double x, double y) { return u(x) * u(y); };
  e.fn.separable = {{u, u}};
  e.fn.x_breaks = {0.0};
  e.fn.y_breaks = {0.0};
  e.fn.known_variation = 4.0;
  e.fn.quadrant_limit_points = {{{0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}};
  e.fn.transform_oracle = factored_oracle(fx, fx);
  e.tags = {ClassTag::BV_V, ClassTag::BV_H, ClassTag::BV_norm0, ClassTag::L1};
  return e;
}

CatalogEntry make_box() {
  auto u = [](double t) { return std::abs(t) <= 1.0 ? 1.0 : 0.0; };
  auto fx = [](double s) { return cplx(cos_window(-1.0, 1.0, s)); };
  CatalogEntry e;
  e.name = "box";
  e.note = "indicator of [-1,1]^2 as a product of 1D steps";
  e.fn.eval = [u](double x, double y) { return u(x) * u(y); };
  e.fn.support = Rect2{-1.0, 1.0, -1.0, 1.0};
  e.fn.separable = {{u, u}};
  e.fn.x_breaks = {-1.0, 1.0};
  e.fn.y_breaks = {-1.0, 1.0};
  e.fn.known_variation = 4.0;
  e.fn.quadrant_limit_points = {
      {{0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}},
      {{1.0, 1.0}, {0.0, 0.0, 0.0, 1.0}},
  };
  e.fn.transform_oracle = factored_oracle(fx, fx);
  e.tags = {ClassTag::BV_V, ClassTag::BV_H, ClassTag::BV_norm0, ClassTag::L1};
  return e;
}

CatalogEntry make_additive() {
  CatalogEntry e;
  e.name = "additive";
  e.note = "x + y on [-5,5]^2, 0 outside; Hardy/Vitali separation witness";
  e.fn.eval = [](double x, double y) {
    return (std::abs(x) <= 5.0 && std::abs(y) <= 5.0) ? x + y : 0.0;
  };
  e.fn.support = Rect2{-5.0, 5.0, -5.0, 5.0};
  e.fn.separable = {
      {[](double x) { return std::abs(x) <= 5.0 ? x : 0.0; },
       [](double y) { return std::abs(y) <= 5.0 ? 1.0 : 0.0; }},
      {[](double x) { return std::abs(x) <= 5.0 ? 1.0 : 0.0; },
       [](double y) { return std::abs(y) <= 5.0 ? y : 0.0; }},
  };
  e.fn.x_breaks = {-5.0, 5.0};
  e.fn.y_breaks = {-5.0, 5.0};
  e.tags = {ClassTag::BV_V};
  return e;
}

CatalogEntry make_bump() {
  auto u = [](double t) { return std::exp(-t * t); };
  auto fx = [](double s) {
    return cplx(std::sqrt(kPi) * std::exp(-s * s / 4.0));
  };
  CatalogEntry e;
  e.name = "bump";
  e.note = "exp(-x^2-y^2); smooth, continuous everywhere";
  e.fn.eval = [u](double x, double y) { return u(x) * u(y); };
  e.fn.separable = {{u, u}};
  e.fn.x_breaks = {0.0};
  e.fn.y_breaks = {0.0};
  e.fn.known_variation = 4.0;
  e.fn.quadrant_limit_points = {{{0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}};
  e.fn.transform_oracle = factored_oracle(fx, fx);
  e.tags = {ClassTag::BV_V, ClassTag::BV_H, ClassTag::BV_norm0, ClassTag::L1};
  return e;
}

}  // namespace

const Registry& standard_catalog() {
  static const Registry reg = [] {
    Registry r;
    r.add(make_zero());
    r.add(make_reciprocal());
    r.add(make_exp2());
    r.add(make_box());
    r.add(make_additive());
    r.add(make_bump());
    return r;
  }();
  return reg;
}

const std::vector<CatalogEntry>& catalog() { return standard_catalog().entries(); }

const CatalogEntry& catalog_get(const std::string& name) {
  return standard_catalog().get(name);
}

}  // namespace kpf::funclib
