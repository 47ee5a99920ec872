#include "ruelle/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/random/sobol.hpp>

#include "ruelle/error.hpp"

namespace ruelle {

using BigRational = boost::multiprecision::cpp_rational;

namespace {

template <class T>
struct System {
  int dim = 0;
  std::vector<std::vector<T>> a;
  std::vector<T> b;
  std::size_t original = 0;  // rows before the bounding box
};

template <class T>
T abs_of(const T& x) {
  return x < T(0) ? T(-x) : x;
}

template <class T>
bool near(const T& x, const T& y, const T& eps) {
  return abs_of(T(x - y)) <= eps;
}

// Gaussian elimination on a square system; nullopt when singular.
template <class T>
std::optional<std::vector<T>> solve(std::vector<std::vector<T>> m, std::vector<T> rhs, const T& eps) {
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (abs_of(m[r][c]) > abs_of(m[piv][c])) piv = r;
    }
    if (abs_of(m[piv][c]) <= eps) return std::nullopt;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == T(0)) continue;
      const T f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

template <class T>
std::vector<std::vector<T>> enumerate_vertices(const System<T>& s, const T& eps, const T& box) {
  const std::size_t rows = s.a.size();
  const auto d = static_cast<std::size_t>(s.dim);
  std::vector<std::vector<T>> out;
  std::vector<std::size_t> pick(d);
  std::vector<bool> sel(rows, false);
  std::fill(sel.begin(), sel.begin() + static_cast<std::ptrdiff_t>(std::min(d, rows)), true);
  if (rows < d) return out;
  do {
    std::size_t j = 0;
    for (std::size_t i = 0; i < rows; ++i)
      if (sel[i]) pick[j++] = i;
    std::vector<std::vector<T>> m;
    std::vector<T> rhs;
    for (std::size_t i : pick) {
      m.push_back(s.a[i]);
      rhs.push_back(s.b[i]);
    }
    auto x = solve(m, rhs, eps);
    if (!x) continue;
    bool feasible = true;
    for (std::size_t i = 0; i < rows && feasible; ++i) {
      T dot(0);
      for (std::size_t k = 0; k < d; ++k) dot += s.a[i][k] * (*x)[k];
      feasible = dot <= s.b[i] + eps;
    }
    if (!feasible) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const std::vector<T>& v) {
      for (std::size_t k = 0; k < d; ++k)
        if (!near(v[k], (*x)[k], eps)) return false;
      return true;
    });
    if (!dup) out.push_back(*x);
  } while (std::prev_permutation(sel.begin(), sel.end()));

  for (const auto& v : out) {
    for (const auto& c : v) {
      if (abs_of(c) >= box - eps) throw SpectrumError("polytope is unbounded");
    }
  }
  return out;
}

template <class T>
System<T> with_box(System<T> s, const T& box) {
  s.original = s.a.size();
  for (int i = 0; i < s.dim; ++i) {
    for (int sign : {1, -1}) {
      std::vector<T> row(static_cast<std::size_t>(s.dim), T(0));
      row[static_cast<std::size_t>(i)] = T(sign);
      s.a.push_back(row);
      s.b.push_back(box);
    }
  }
  return s;
}

// Sorts 2-D points counter-clockwise around their centroid.
template <class T>
void sort_ccw(std::vector<std::array<T, 2>>& pts) {
  T cx(0), cy(0);
  for (const auto& p : pts) {
    cx += p[0];
    cy += p[1];
  }
  const T n(static_cast<int>(pts.size()));
  cx /= n;
  cy /= n;
  auto half = [&](const std::array<T, 2>& p) {
    const T dx = p[0] - cx;
    const T dy = p[1] - cy;
    return dy < T(0) || (dy == T(0) && dx < T(0));
  };
  std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
    const bool hp = half(p);
    const bool hq = half(q);
    if (hp != hq) return !hp;
    const T cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx);
    return cross > T(0);
  });
}

template <class T>
T polygon_area(std::vector<std::array<T, 2>> pts) {
  if (pts.size() < 3) return T(0);
  sort_ccw(pts);
  T twice(0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    twice += p[0] * q[1] - p[1] * q[0];
  }
  return abs_of(twice) / T(2);
}

template <class T>
T det3(const std::vector<T>& a, const std::vector<T>& b, const std::vector<T>& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

template <class T>
T volume_of(const System<T>& s, const std::vector<std::vector<T>>& v, const T& eps) {
  if (v.empty()) return T(0);
  if (s.dim == 1) {
    T lo = v[0][0], hi = v[0][0];
    for (const auto& p : v) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return hi - lo;
  }
  if (s.dim == 2) {
    std::vector<std::array<T, 2>> pts;
    for (const auto& p : v) pts.push_back({p[0], p[1]});
    return polygon_area(pts);
  }
  // dim 3: fan every facet from the vertex centroid.
  std::vector<T> c(3, T(0));
  for (const auto& p : v)
    for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k)];
  for (auto& x : c) x /= T(static_cast<int>(v.size()));
  T total(0);
  for (std::size_t f = 0; f < s.original; ++f) {
    std::vector<std::vector<T>> face;
    for (const auto& p : v) {
      T dot(0);
      for (int k = 0; k < 3; ++k) dot += s.a[f][static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)];
      if (near(dot, s.b[f], eps)) face.push_back(p);
    }
    if (face.size() < 3) continue;
    std::size_t drop = 0;
    for (std::size_t k = 1; k < 3; ++k)
      if (abs_of(s.a[f][k]) > abs_of(s.a[f][drop])) drop = k;
    const std::size_t u = drop == 0 ? 1 : 0;
    const std::size_t w = drop == 2 ? 1 : 2;
    std::vector<std::array<T, 2>> flat;
    for (const auto& p : face) flat.push_back({p[u], p[w]});
    // Sort the face through its projection, keeping the 3-D points aligned.
    std::vector<std::size_t> idx(face.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    auto sorted = flat;
    sort_ccw(sorted);
    std::vector<std::vector<T>> ring;
    for (const auto& q : sorted) {
      for (std::size_t i = 0; i < flat.size(); ++i) {
        if (flat[i][0] == q[0] && flat[i][1] == q[1]) {
          ring.push_back(face[i]);
          break;
        }
      }
    }
    for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
      std::vector<T> a(3), b(3), d(3);
      for (std::size_t k = 0; k < 3; ++k) {
        a[k] = ring[0][k] - c[k];
        b[k] = ring[i][k] - c[k];
        d[k] = ring[i + 1][k] - c[k];
      }
      total += abs_of(det3(a, b, d));
    }
  }
  return total / T(6);
}

bool rational_data(const WeylPolytope& p) {
  for (const auto& h : p.halfspaces) {
    if (!h.bound.rational()) return false;
    for (const auto& x : h.normal)
      if (!x.rational()) return false;
  }
  return true;
}

BigRational big(const Rational& q) { return BigRational(q.numerator()) / BigRational(q.denominator()); }

System<double> double_system(const WeylPolytope& p) {
  System<double> s;
  s.dim = p.dim;
  for (const auto& h : p.halfspaces) {
    std::vector<double> row;
    for (const auto& x : h.normal) row.push_back(x.value());
    s.a.push_back(row);
    s.b.push_back(h.bound.value());
  }
  return s;
}

constexpr double kDoubleBox = 1e7;

VolumeEstimate exact_volume(const WeylPolytope& p) {
  if (p.dim < 1 || p.dim > 3) throw SpectrumError("the exact volume engine handles dimensions 1 to 3");
  VolumeEstimate est;
  est.exact = true;
  if (rational_data(p)) {
    System<BigRational> s;
    s.dim = p.dim;
    for (const auto& h : p.halfspaces) {
      std::vector<BigRational> row;
      for (const auto& x : h.normal) row.push_back(big(*x.rational()));
      s.a.push_back(row);
      s.b.push_back(big(*h.bound.rational()));
    }
    const BigRational box(std::int64_t{1} << 30);
    const auto sb = with_box(s, box);
    const auto verts = enumerate_vertices(sb, BigRational(0), box);
    const BigRational vol = volume_of(sb, verts, BigRational(0));
    est.value = static_cast<double>(vol);
    const auto num = boost::multiprecision::numerator(vol);
    const auto den = boost::multiprecision::denominator(vol);
    const boost::multiprecision::cpp_int limit(std::numeric_limits<std::int64_t>::max());
    if (boost::multiprecision::abs(num) <= limit && den <= limit) {
      est.rational = Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
    }
    return est;
  }
  const auto sb = with_box(double_system(p), kDoubleBox);
  const auto verts = enumerate_vertices(sb, 1e-10, kDoubleBox);
  est.value = volume_of(sb, verts, 1e-9);
  return est;
}

VolumeEstimate monte_carlo_volume(const WeylPolytope& p, std::uint64_t samples, std::uint64_t seed) {
  const auto verts = polytope_vertices(p);
  VolumeEstimate est;
  if (verts.empty()) return est;
  const auto d = static_cast<std::size_t>(p.dim);
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& v : verts) {
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  }
  double box_volume = 1.0;
  for (std::size_t k = 0; k < d; ++k) box_volume *= hi[k] - lo[k];
  if (box_volume == 0.0) return est;

  const System<double> s = double_system(p);
  constexpr int replicates = 16;
  const std::uint64_t per = std::max<std::uint64_t>(1, samples / replicates);
  boost::random::sobol sobol(static_cast<unsigned>(d));
  const double scale = 1.0 / (static_cast<double>(sobol.max()) + 1.0);
  std::vector<double> points(per * d);
  for (auto& x : points) x = static_cast<double>(sobol()) * scale;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> estimates;
  std::vector<double> x(d);
  for (int r = 0; r < replicates; ++r) {
    std::vector<double> shift(d);
    for (auto& v : shift) v = unit(rng);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < per; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        double u = points[i * d + k] + shift[k];
        if (u >= 1.0) u -= 1.0;
        x[k] = lo[k] + u * (hi[k] - lo[k]);
      }
      bool inside = true;
      for (std::size_t h = 0; h < s.a.size() && inside; ++h) {
        double dot = 0.0;
        for (std::size_t k = 0; k < d; ++k) dot += s.a[h][k] * x[k];
        inside = dot <= s.b[h];
      }
      hits += inside;
    }
    estimates.push_back(box_volume * static_cast<double>(hits) / static_cast<double>(per));
  }
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= replicates;
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var /= (replicates - 1);
  est.value = mean;
  est.error = 3.0 * std::sqrt(var / replicates);
  return est;
}

}  // namespace

WeylPolytope polytope(const CriticalElement& elem) {
  WeylPolytope p;
  p.element = elem.name;
  const std::size_t m = elem.eigenvalues.size();
  const bool orbit = elem.is_orbit();
  p.dim = static_cast<int>(m) + (orbit ? 1 : 0);
  const auto d = static_cast<std::size_t>(p.dim);
  auto push = [&](std::vector<Real> normal, Real bound) {
    const bool zero = std::all_of(normal.begin(), normal.end(), [](const Real& x) { return x.value() == 0.0; });
    if (!zero) p.halfspaces.push_back({std::move(normal), std::move(bound)});
  };
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Real> row(d);
    row[i] = Real::from_int(-1);
    push(row, Real());
  }
  std::vector<Real> omega(d);
  std::vector<Real> chi_plus(d);
  for (std::size_t i = 0; i < m; ++i) {
    const EigenDatum& e = elem.eigenvalues[i];
    omega[i] = e.omega;
    chi_plus[i] = e.chi.value() < 0 ? -e.chi : e.chi;
  }
  if (orbit) omega[m] = two_pi_over(elem.period);
  std::vector<Real> neg_omega(d);
  for (std::size_t i = 0; i < d; ++i) neg_omega[i] = -omega[i];
  push(omega, Real::from_int(1));
  push(neg_omega, Real::from_int(1));
  push(chi_plus, Real::from_int(1));
  return p;
}

std::vector<std::vector<double>> polytope_vertices(const WeylPolytope& p) {
  const auto sb = with_box(double_system(p), kDoubleBox);
  return enumerate_vertices(sb, 1e-10, kDoubleBox);
}

VolumeEstimate polytope_volume(const WeylPolytope& p, VolumeMethod method, std::uint64_t samples, std::uint64_t seed) {
  if (method == VolumeMethod::automatic) method = p.dim <= 3 ? VolumeMethod::exact : VolumeMethod::montecarlo;
  if (method == VolumeMethod::exact) return exact_volume(p);
  return monte_carlo_volume(p, samples, seed);
}

}  // namespace ruelle
