#pragma once

#include <set>
#include <string>
#include <vector>

#include "kpf/bv_function.hpp"

namespace kpf::funclib {

enum class ClassTag { BV_V, BV_H, BV_norm0, L1 };

const char* tag_name(ClassTag t);

struct CatalogEntry {
  std::string name;
  std::string note;
  BvFunction2 fn;
  std::set<ClassTag> tags;
};

// Gamma(0, i s) as the improper oscillatory integral of e^{-i s t}/t over
// [1, inf), period-snapped chunks with tail acceleration; |error| <= 1e-8.
cplx gamma0_oracle(double s);

class Registry {
 public:
  // Validates the entry: unique name, vanishing diagnostics for a BV_norm0
  // claim, and a transform-oracle spot check against the direct transform.
  void add(CatalogEntry entry);

  const CatalogEntry& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<CatalogEntry>& entries() const { return entries_; }

 private:
  std::vector<CatalogEntry> entries_;
};

// The built-in entries: reciprocal, exp2, box, additive, bump, zero.
// Immutable after first use.
const Registry& standard_catalog();
const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_get(const std::string& name);

}  // namespace kpf::funclib
