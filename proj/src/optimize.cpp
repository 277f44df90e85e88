#include "doublepass/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace doublepass {

MinResult golden_section_minimize(const std::function<double(double)>& f,
                                  double lo, double hi, double xtol) {
  if (!(hi > lo)) throw std::invalid_argument("minimize: empty interval");
  if (!(xtol > 0.0)) throw std::invalid_argument("minimize: xtol must be > 0");
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  MinResult res;
  res.x = fc < fd ? c : d;
  res.value = std::min(fc, fd);
  res.evals = evals;
  return res;
}

MinResult polished_minimize(const std::function<double(double)>& f, double lo,
                            double hi, double xtol) {
  MinResult res = golden_section_minimize(f, lo, hi, xtol);
  // parabola through (x-h, x, x+h); vertex is exact for quadratic objectives
  const double h = std::max(xtol, 1e-12 * (std::abs(res.x) + 1.0));
  const double xm = res.x - h, xp = res.x + h;
  if (xm > lo && xp < hi) {
    const double fm = f(xm), f0 = res.value, fp = f(xp);
    res.evals += 2;
    const double denom = fm - 2.0 * f0 + fp;
    if (denom > 0.0) {
      const double step = 0.5 * h * (fm - fp) / denom;
      const double xv = res.x + step;
      const double fv = f(xv);
      ++res.evals;
      if (fv <= res.value) {
        res.x = xv;
        res.value = fv;
      }
    }
  }
  return res;
}

}  // namespace doublepass
