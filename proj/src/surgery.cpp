#include "branchkh/surgery.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace branchkh {

FibreSlope fibre_slope(int64_t p, int64_t q) { return FibreSlope(p * q, 1); }

int64_t slope_distance(const SurgerySlope& a, const FibreSlope& f) {
  int64_t v = a.r() * f.s() - a.s() * f.r();
  return v < 0 ? -v : v;
}

OrbifoldBase::OrbifoldBase(int64_t a, int64_t b, int64_t c) : orders{a, b, c} {
  for (int64_t x : orders)
    if (x < 1) throw std::invalid_argument("cone orders must be positive");
  std::sort(orders.begin(), orders.end());
}

std::string OrbifoldBase::str() const {
  return "S2(" + std::to_string(orders[0]) + "," + std::to_string(orders[1]) + "," +
         std::to_string(orders[2]) + ")";
}

OrbifoldBase base_orbifold(int64_t p, int64_t q, int64_t n, SurgerySign sign) {
  if (p <= 0 || q <= p || std::gcd(p, q) != 1) {
    throw std::invalid_argument("base_orbifold needs 0 < p < q coprime");
  }
  if (n <= 0) throw std::invalid_argument("base_orbifold needs n > 0");
  int64_t by_formula = p * q * n - sign_value(sign);
  int64_t by_distance = slope_distance(SurgerySlope(sign_value(sign), n), fibre_slope(p, q));
  if (by_distance == 0) throw std::logic_error("surgery slope equals the fibre slope");
  if (by_formula != by_distance) {
    throw std::logic_error("cone order mismatch: " + std::to_string(by_formula) + " vs " +
                           std::to_string(by_distance));
  }
  return OrbifoldBase(p, q, by_distance);
}

int64_t h1_order(const SurgerySlope& s) { return s.r() < 0 ? -s.r() : s.r(); }

std::string CorrespondenceRow::torus_name() const {
  return "T(" + std::to_string(torus_p) + "," + std::to_string(torus_q) + ")";
}

CorrespondenceRow correspondence_row(int64_t q, int64_t n, SurgerySign sign) {
  if (q <= 1 || q % 2 == 0) throw std::invalid_argument("correspondence_row needs odd q > 1");
  if (n <= 0) throw std::invalid_argument("correspondence_row needs n > 0");
  CorrespondenceRow row{base_orbifold(2, q, n, sign), q, 2 * q * n - sign_value(sign),
                        Slope(sign_value(sign), n), 0};
  row.expected_determinant = h1_order(row.tau_slope);
  return row;
}

}  // namespace branchkh
