// Emits golden_constants.hpp from the reference quadrature oracles, so the
// recorded constants stay reproducible instead of hand-entered.

#include <cstdio>

#include "oracles.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: golden_gen <output-header>\n");
    return 1;
  }
  std::FILE* out = std::fopen(argv[1], "w");
  if (!out) {
    std::fprintf(stderr, "cannot open %s\n", argv[1]);
    return 1;
  }

  std::fprintf(out, "// Generated by golden_gen from the reference oracles.\n");
  std::fprintf(out, "#pragma once\n#include <complex>\n\n");
  std::fprintf(out, "namespace golden {\n\n");

  std::fprintf(out, "inline constexpr double kSiPi = %.17g;\n",
               oracle::si(3.14159265358979323846));
  std::fprintf(out, "inline constexpr double kSi2Pi = %.17g;\n\n",
               oracle::si(2.0 * 3.14159265358979323846));

  const double args[] = {0.5, 1.0, 2.0, 3.0};
  std::fprintf(out, "inline constexpr double kGamma0Args[] = {0.5, 1.0, 2.0, 3.0};\n");
  std::fprintf(out, "inline const std::complex<double> kGamma0Values[] = {\n");
  for (double s : args) {
    const auto v = oracle::gamma0(s);
    std::fprintf(out, "    {%.17g, %.17g},\n", v.real(), v.imag());
  }
  std::fprintf(out, "};\n\n}  // namespace golden\n");
  std::fclose(out);
  return 0;
}
