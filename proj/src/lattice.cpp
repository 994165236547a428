#include "singularlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace singlab {

namespace {

constexpr double kTiny = std::numeric_limits<double>::denorm_min();

Integer round_half_up(const Rational& x) {
  Rational shifted = x + Rational(1, 2);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return q;
}

Integer scaled_floor(const Scalar& x, long F) {
  Scalar scaled = x * Scalar(pow_rational(Rational(2), F));
  return scaled.floor();
}

double integer_to_double(const Integer& m, long shift) {
  if (m == 0) return 0.0;
  long e = 0;
  double d = mpz_get_d_2exp(&e, m.get_mpz_t());
  return std::ldexp(d, static_cast<int>(std::clamp<long>(e - shift, -2000, 2000)));
}

double rational_upper(const Rational& r) {
  double d = r.get_d();
  return std::nextafter(std::fabs(d) * (1 + 1e-12), std::numeric_limits<double>::infinity()) + kTiny;
}

// Exact inverse of a square rational matrix (row-major); throws if singular.
RationalMatrix rational_inverse(RationalMatrix a) {
  const std::size_t n = a.size();
  RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw Error(Errc::InvalidInput, "basis approximation is singular");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rational piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

using IntegerMatrix = std::vector<std::vector<Integer>>;

IntegerMatrix to_integer_matrix(const IntMatrix& m) {
  IntegerMatrix out(m.rows(), std::vector<Integer>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = static_cast<long>(m(i, j));
  return out;
}

IntMatrix from_integer_matrix(const IntegerMatrix& m, std::size_t rows, std::size_t cols) {
  IntMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (!m[i][j].fits_slong_p()) throw Error(Errc::InvalidInput, "integer entry exceeds 64 bits");
      out(i, j) = m[i][j].get_si();
    }
  }
  return out;
}

void add_col_multiple(IntegerMatrix& h, std::size_t dst, std::size_t src, const Integer& q) {
  for (auto& row : h) row[dst] -= q * row[src];
}

}  // namespace

BigMatrix big_identity(int n) {
  BigMatrix m(n, std::vector<Integer>(n, Integer(0)));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

DoubleBound to_double_bound(const Scalar& x) {
  if (x.is_hpfloat()) {
    double d = x.to_double();
    return {d, std::fabs(d) * 0x1p-50 + x.hpfloat().error() * (1 + 1e-12) + kTiny};
  }
  double d = x.to_double();
  return {d, std::fabs(d) * 0x1p-48 + kTiny};
}

int scalar_rank(const ScalarMatrix& input) {
  ScalarMatrix m = input;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  int rank = 0;
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = rank; r < rows; ++r) {
      if (m(r, c).is_exact_zero()) continue;
      if (m(r, c).sign() != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(rank));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      if (m(r, c).is_exact_zero()) continue;
      Scalar f = m(r, c) / m(rank, c);
      for (Eigen::Index j = c; j < cols; ++j) m(r, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

LatticeBasis::LatticeBasis(ScalarMatrix columns) : cols_(std::move(columns)) {
  if (cols_.cols() > cols_.rows()) throw Error(Errc::InvalidInput, "more basis vectors than the dimension");
  if (scalar_rank(cols_) != cols_.cols()) throw Error(Errc::InvalidInput, "basis vectors are linearly dependent");
}

Submodule::Submodule(IntMatrix generators) : gens_(std::move(generators)) {
  if (gens_.cols() == 0) throw Error(Errc::InvalidInput, "submodule needs at least one generator");
  if (scalar_rank(to_scalar(gens_)) != gens_.cols()) {
    throw Error(Errc::InvalidInput, "submodule generators are linearly dependent");
  }
}

MultiVector<Scalar> Submodule::wedge() const { return wedge_columns(to_scalar(gens_)); }

bool operator==(const Submodule& a, const Submodule& b) {
  return a.dim() == b.dim() && a.rank() == b.rank() && hnf(a.gens_) == hnf(b.gens_);
}

Scalar covolume(const Submodule& d) { return sup_norm(d.wedge()); }

Scalar covolume(const ScalarMatrix& columns) { return sup_norm(wedge_columns(columns)); }

BigMatrix lll_transform(const RationalMatrix& b_in, int rows, int cols) {
  // b[c] is column c
  std::vector<std::vector<Rational>> b(cols, std::vector<Rational>(rows));
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) b[c][i] = b_in[i][c];
  BigMatrix U = big_identity(cols);
  const Rational delta(99, 100);

  std::vector<std::vector<Rational>> mu(cols, std::vector<Rational>(cols));
  std::vector<Rational> Bn(cols);
  auto dot = [&](const std::vector<Rational>& x, const std::vector<Rational>& y) {
    Rational s = 0;
    for (int i = 0; i < rows; ++i) s += x[i] * y[i];
    return s;
  };
  auto gram_schmidt = [&]() {
    std::vector<std::vector<Rational>> bs(cols);
    for (int c = 0; c < cols; ++c) {
      bs[c] = b[c];
      for (int j = 0; j < c; ++j) {
        mu[c][j] = dot(b[c], bs[j]) / Bn[j];
        for (int i = 0; i < rows; ++i) bs[c][i] -= mu[c][j] * bs[j][i];
      }
      Bn[c] = dot(bs[c], bs[c]);
      if (Bn[c] == 0) throw Error(Errc::InvalidInput, "basis approximation is degenerate");
    }
  };
  auto reduce = [&](int k, int l) {
    Integer q = round_half_up(mu[k][l]);
    if (q == 0) return;
    Rational qr(q);
    for (int i = 0; i < rows; ++i) b[k][i] -= qr * b[l][i];
    for (int i = 0; i < cols; ++i) U[i][k] -= q * U[i][l];
    for (int j = 0; j < l; ++j) mu[k][j] -= qr * mu[l][j];
    mu[k][l] -= qr;
  };

  gram_schmidt();
  int k = 1;
  std::uint64_t steps = 0;
  while (k < cols) {
    if (++steps > 1'000'000) throw Error(Errc::BoxOverflow, "LLL did not converge");
    reduce(k, k - 1);
    if (Bn[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * Bn[k - 1]) {
      std::swap(b[k], b[k - 1]);
      for (int i = 0; i < cols; ++i) std::swap(U[i][k], U[i][k - 1]);
      gram_schmidt();
      k = std::max(k - 1, 1);
    } else {
      for (int l = k - 2; l >= 0; --l) reduce(k, l);
      ++k;
    }
  }
  return U;
}

namespace {

// Fractional bits for dyadic approximations: enough to resolve the
// smallest nonzero entry with 64 bits to spare.
long approximation_bits(const ScalarMatrix& m) {
  double min_log = 0.0;
  bool any = false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).is_exact_zero()) continue;
      double l = m(i, j).log_abs() / std::log(2.0);
      if (!any || l < min_log) min_log = l;
      any = true;
    }
  }
  long F = 64 - static_cast<long>(std::floor(min_log));
  return std::clamp<long>(F, 64, 20000);
}

struct DyadicMatrix {
  std::vector<std::vector<Integer>> mant;  // row-major
  long F = 0;
  double eta = 0.0;  // entrywise absolute error bound
};

DyadicMatrix dyadic_approx(const ScalarMatrix& m, long F) {
  DyadicMatrix d;
  d.F = F;
  d.mant.assign(m.rows(), std::vector<Integer>(m.cols()));
  double hp = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).is_hpfloat()) {
        // the floor of an interval may be undecidable; use the midpoint
        Rational mid = m(i, j).hpfloat().midpoint() * pow_rational(Rational(2), F);
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), mid.get_num_mpz_t(), mid.get_den_mpz_t());
        d.mant[i][j] = q;
        hp = std::max(hp, m(i, j).hpfloat().error());
      } else {
        d.mant[i][j] = scaled_floor(m(i, j), F);
      }
    }
  }
  d.eta = std::ldexp(1.0, static_cast<int>(std::max<long>(-F, -1070))) * (1 + 1e-12) + hp * (1 + 1e-12) + kTiny;
  return d;
}

ScalarMatrix apply_transform(const ScalarMatrix& basis, const BigMatrix& U) {
  ScalarMatrix out(basis.rows(), basis.cols());
  for (Eigen::Index i = 0; i < basis.rows(); ++i) {
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
      Scalar acc(0);
      for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        if (U[k][c] == 0) continue;
        acc += basis(i, k) * Scalar(U[k][c]);
      }
      out(i, c) = acc;
    }
  }
  return out;
}

}  // namespace

LllResult lll_reduce(const LatticeBasis& basis) {
  const ScalarMatrix& B = basis.matrix();
  DyadicMatrix d = dyadic_approx(B, approximation_bits(B));
  RationalMatrix rows(B.rows(), std::vector<Rational>(B.cols()));
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j) rows[i][j] = Rational(d.mant[i][j]);
  BigMatrix U = lll_transform(rows, static_cast<int>(B.rows()), static_cast<int>(B.cols()));
  return {apply_transform(B, U), U};
}

void enumerate_short(const std::vector<std::vector<double>>& columns, double radius,
                     const std::function<void(const std::vector<long>&)>& visit, std::uint64_t budget) {
  const int r = static_cast<int>(columns.size());
  if (r == 0) return;
  const int m = static_cast<int>(columns[0].size());
  std::vector<std::vector<double>> bs(r, std::vector<double>(m));
  std::vector<std::vector<double>> mu(r, std::vector<double>(r, 0.0));
  std::vector<double> Bn(r);
  for (int c = 0; c < r; ++c) {
    bs[c] = columns[c];
    for (int j = 0; j < c; ++j) {
      double dotp = 0;
      for (int i = 0; i < m; ++i) dotp += columns[c][i] * bs[j][i];
      mu[c][j] = dotp / Bn[j];
      for (int i = 0; i < m; ++i) bs[c][i] -= mu[c][j] * bs[j][i];
    }
    Bn[c] = 0;
    for (int i = 0; i < m; ++i) Bn[c] += bs[c][i] * bs[c][i];
    if (!(Bn[c] > 0)) throw Error(Errc::InvalidInput, "degenerate basis in short-vector enumeration");
  }
  const double R2 = radius * radius;
  std::vector<long> x(r, 0);
  std::uint64_t nodes = 0;
  std::function<void(int, double)> rec = [&](int level, double used) {
    double center = 0;
    for (int j = level + 1; j < r; ++j) center -= mu[j][level] * static_cast<double>(x[j]);
    double slack = R2 - used;
    if (slack < 0) return;
    double half = std::sqrt(slack / Bn[level]);
    long lo = static_cast<long>(std::ceil(center - half - 1e-9));
    long hi = static_cast<long>(std::floor(center + half + 1e-9));
    for (long v = lo; v <= hi; ++v) {
      if (++nodes > budget) throw Error(Errc::BoxOverflow, "short-vector enumeration exceeded its budget");
      double diff = static_cast<double>(v) - center;
      double next = used + diff * diff * Bn[level];
      if (next > R2 * (1 + 1e-12)) continue;
      x[level] = v;
      if (level == 0) {
        bool zero = std::all_of(x.begin(), x.end(), [](long t) { return t == 0; });
        if (!zero) visit(x);
      } else {
        rec(level - 1, next);
      }
    }
    x[level] = 0;
  };
  rec(r - 1, 0.0);
}

ShortestVector shortest_vector(const LatticeBasis& basis, const SvpOptions& options) {
  const int r = basis.rank();
  const int m = basis.dim();
  if (r > options.dim_cap) {
    throw Error(Errc::DimensionTooLarge,
                "rank " + std::to_string(r) + " exceeds the SVP cap of " + std::to_string(options.dim_cap));
  }
  LllResult red = lll_reduce(basis);
  const ScalarMatrix& Bp = red.basis;

  // Coefficient box from the inverse Gram matrix of a dyadic approximation,
  // widened by the approximation error.
  long F = approximation_bits(Bp);
  std::vector<double> box(r);
  DyadicMatrix d;
  for (int attempt = 0;; ++attempt) {
    d = dyadic_approx(Bp, F);
    RationalMatrix gram(r, std::vector<Rational>(r, Rational(0)));
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        Integer s = 0;
        for (int i = 0; i < m; ++i) s += d.mant[i][a] * d.mant[i][b];
        gram[a][b] = Rational(s);
      }
    RationalMatrix inv = rational_inverse(gram);
    // true G~^{-1} = 2^{2F} * inv
    std::vector<double> g(r);
    double gmax = 0;
    for (int i = 0; i < r; ++i) {
      Rational scaled = inv[i][i];
      mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), static_cast<unsigned long>(2 * F));
      g[i] = std::sqrt(rational_upper(scaled)) * (1 + 1e-12);
      gmax = std::max(gmax, g[i]);
    }
    double eps = std::sqrt(static_cast<double>(m) * r) * d.eta * (1 + 1e-12);
    double shortest_col = std::numeric_limits<double>::infinity();
    for (int c = 0; c < r; ++c) {
      double mx = 0;
      for (int i = 0; i < m; ++i) mx = std::max(mx, std::fabs(integer_to_double(d.mant[i][c], F)));
      shortest_col = std::min(shortest_col, (mx + d.eta) * (1 + 1e-12));
    }
    double V2 = std::sqrt(static_cast<double>(m)) * shortest_col * (1 + 1e-12);
    double denom = 1.0 - gmax * eps * std::sqrt(static_cast<double>(r));
    if (denom > 0.5 && std::isfinite(gmax)) {
      double amax = gmax * V2 / denom;
      for (int i = 0; i < r; ++i) box[i] = g[i] * (V2 + eps * std::sqrt(static_cast<double>(r)) * amax) * (1 + 1e-9);
      break;
    }
    if (attempt > 8) throw Error(Errc::UndecidableComparison, "basis too ill-conditioned for a certified box");
    F += 128;
  }

  std::vector<long> R(r);
  double total = 1;
  for (int i = 0; i < r; ++i) {
    double bi = std::floor(box[i]) * options.box_scale;
    if (bi > 1e9) throw Error(Errc::BoxOverflow, "SVP coefficient box too large");
    R[i] = static_cast<long>(bi);
    total *= 2.0 * R[i] + 1;
  }
  if (total > static_cast<double>(options.budget)) {
    throw Error(Errc::BoxOverflow, "SVP box of " + std::to_string(total) + " points exceeds the budget");
  }

  // Double evaluation with rigorous per-entry error weights.
  std::vector<std::vector<double>> dv(m, std::vector<double>(r));
  std::vector<std::vector<double>> we(m, std::vector<double>(r));
  const double gamma = (r + 2) * 0x1p-52;
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < r; ++c) {
      dv[i][c] = integer_to_double(d.mant[i][c], F);
      we[i][c] = (d.eta + std::fabs(dv[i][c]) * (0x1p-52 + gamma)) * 1.01 + kTiny;
    }
  }

  struct Candidate {
    std::vector<long> a;
    double lower;
  };
  std::vector<Candidate> cands;
  double best_upper = std::numeric_limits<double>::infinity();
  std::vector<long> a(r, 0);
  // partial[c] holds the sum over coordinates >= c
  std::vector<std::vector<double>> partial(r + 1, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> perr(r + 1, std::vector<double>(m, 0.0));

  std::function<void(int, bool)> rec = [&](int c, bool started) {
    if (c < 0) {
      if (!started) return;
      double lower = 0, upper = 0;
      for (int i = 0; i < m; ++i) {
        double v = std::fabs(partial[0][i]);
        lower = std::max(lower, v - perr[0][i]);
        upper = std::max(upper, v + perr[0][i]);
      }
      if (lower > best_upper) return;
      if (upper < best_upper) {
        best_upper = upper;
        if (cands.size() > 4096) {
          std::erase_if(cands, [&](const Candidate& x) { return x.lower > best_upper; });
        }
      }
      cands.push_back({a, lower});
      return;
    }
    long lo = started ? -R[c] : 0;
    for (long v = lo; v <= R[c]; ++v) {
      a[c] = v;
      for (int i = 0; i < m; ++i) {
        partial[c][i] = partial[c + 1][i] + dv[i][c] * static_cast<double>(v);
        perr[c][i] = perr[c + 1][i] + we[i][c] * static_cast<double>(v < 0 ? -v : v);
      }
      rec(c - 1, started || v != 0);
    }
    a[c] = 0;
  };
  rec(r - 1, false);

  std::erase_if(cands, [&](const Candidate& x) { return x.lower > best_upper; });
  if (cands.empty()) throw Error(Errc::InvalidInput, "SVP enumeration found no vector");

  ShortestVector best;
  bool have = false;
  for (const auto& cand : cands) {
    ScalarVector v = ScalarVector::Constant(m, Scalar(0));
    for (int c = 0; c < r; ++c) {
      if (cand.a[c] == 0) continue;
      for (int i = 0; i < m; ++i) v(i) += Bp(i, c) * Scalar(cand.a[c]);
    }
    Scalar norm = sup_norm(v);
    std::vector<Integer> coeff(r, Integer(0));
    for (int i = 0; i < r; ++i)
      for (int c = 0; c < r; ++c) coeff[i] += red.transform[i][c] * cand.a[c];
    if (normalize_last_positive(coeff)) v = -v;
    if (!have) {
      best = {v, norm, coeff};
      have = true;
      continue;
    }
    auto ord = scalar_cmp(norm, best.norm);
    if (ord < 0 || (ord == 0 && colex_less(coeff, best.coefficients))) best = {v, norm, coeff};
  }
  // Reassemble from the input basis so the reported vector is exactly B * coefficients.
  ScalarVector v = ScalarVector::Constant(m, Scalar(0));
  for (int c = 0; c < r; ++c) {
    if (best.coefficients[c] == 0) continue;
    for (int i = 0; i < m; ++i) v(i) += basis.matrix()(i, c) * Scalar(best.coefficients[c]);
  }
  best.vector = v;
  return best;
}

IntMatrix hnf(const IntMatrix& generators) {
  IntegerMatrix h = to_integer_matrix(generators);
  const std::size_t rows = generators.rows(), cols = generators.cols();
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows && k < cols; ++i) {
    for (std::size_t c = k + 1; c < cols; ++c) {
      if (h[i][c] == 0) continue;
      if (h[i][k] == 0) {
        for (auto& row : h) std::swap(row[k], row[c]);
        continue;
      }
      Integer a = h[i][k], b = h[i][c], g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer ag = a / g, bg = b / g;
      for (auto& row : h) {
        Integer x = row[k], y = row[c];
        row[k] = s * x + t * y;
        row[c] = ag * y - bg * x;
      }
    }
    if (h[i][k] == 0) continue;
    if (h[i][k] < 0)
      for (auto& row : h) row[k] = -row[k];
    for (std::size_t l = 0; l < k; ++l) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h[i][l].get_mpz_t(), h[i][k].get_mpz_t());
      if (q != 0) add_col_multiple(h, l, k, q);
    }
    ++k;
  }
  return from_integer_matrix(h, rows, k);
}

SmithForm smith(const IntMatrix& generators) {
  IntegerMatrix a = to_integer_matrix(generators);
  const std::size_t m = generators.rows(), n = generators.cols();
  SmithForm out;
  out.left = big_identity(static_cast<int>(m));
  out.left_inverse = big_identity(static_cast<int>(m));

  auto row_swap = [&](std::size_t x, std::size_t y) {
    std::swap(a[x], a[y]);
    std::swap(out.left[x], out.left[y]);
    for (auto& row : out.left_inverse) std::swap(row[x], row[y]);
  };
  // row y += q * row x
  auto row_add = [&](std::size_t y, std::size_t x, const Integer& q) {
    for (std::size_t j = 0; j < n; ++j) a[y][j] += q * a[x][j];
    for (std::size_t j = 0; j < m; ++j) out.left[y][j] += q * out.left[x][j];
    for (auto& row : out.left_inverse) row[x] -= q * row[y];
  };
  auto row_negate = [&](std::size_t x) {
    for (auto& v : a[x]) v = -v;
    for (auto& v : out.left[x]) v = -v;
    for (auto& row : out.left_inverse) row[x] = -row[x];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& row : a) std::swap(row[x], row[y]);
  };
  auto col_add = [&](std::size_t y, std::size_t x, const Integer& q) {
    for (auto& row : a) row[y] += q * row[x];
  };

  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // smallest nonzero entry of the remaining block goes to (t, t)
      std::size_t pr = m, pc = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a[i][j] != 0 && (pr == m || abs(a[i][j]) < abs(a[pr][pc]))) pr = i, pc = j;
      if (pr == m) break;
      if (pr != t) row_swap(pr, t);
      if (pc != t) col_swap(pc, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        row_add(i, t, -q);
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        col_add(j, t, -q);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a[i][j] % a[t][t] != 0) {
            row_add(t, i, Integer(1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a[t][t] == 0) break;
    if (a[t][t] < 0) row_negate(t);
    out.divisors.push_back(a[t][t]);
  }
  return out;
}

bool is_primitive(const Submodule& d) {
  SmithForm s = smith(d.generators());
  return std::all_of(s.divisors.begin(), s.divisors.end(), [](const Integer& v) { return v == 1; });
}

Submodule saturate(const Submodule& d) {
  SmithForm s = smith(d.generators());
  const int m = d.dim(), r = d.rank();
  IntegerMatrix cols(m, std::vector<Integer>(r));
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < r; ++c) cols[i][c] = s.left_inverse[i][c];
  return Submodule(hnf(from_integer_matrix(cols, m, r)));
}

void for_each_primitive(int m, int r, long bound, const std::function<bool(const Submodule&)>& visit) {
  if (r < 1 || r > m || bound < 1) throw Error(Errc::InvalidInput, "need 1 <= r <= m and bound >= 1");
  std::vector<int> pivots(r);
  IntMatrix h = IntMatrix::Zero(m, r);
  bool stop = false;

  // Fill column c (pivot row pivots[c]) then recurse; entries below the
  // pivot in a later pivot row are reduced modulo that pivot, so columns are
  // filled from the last one backwards.
  std::function<void(int)> fill_column;
  std::function<void(int, int, int)> fill_entry = [&](int c, int row, int after) {
    if (stop) return;
    if (row == m) {
      fill_column(after);
      return;
    }
    int later = -1;
    for (int d = c + 1; d < r; ++d)
      if (pivots[d] == row) later = d;
    long lo = -bound, hi = bound;
    if (later >= 0) {
      lo = 0;
      hi = h(row, later) - 1;
    }
    for (long v = lo; v <= hi && !stop; ++v) {
      h(row, c) = v;
      fill_entry(c, row + 1, after);
    }
    h(row, c) = 0;
  };
  fill_column = [&](int c) {
    if (stop) return;
    if (c < 0) {
      Submodule d(h);
      if (is_primitive(d) && !visit(d)) stop = true;
      return;
    }
    for (long p = 1; p <= bound && !stop; ++p) {
      h(pivots[c], c) = p;
      fill_entry(c, pivots[c] + 1, c - 1);
    }
    h(pivots[c], c) = 0;
  };
  std::function<void(int, int)> choose = [&](int c, int start) {
    if (stop) return;
    if (c == r) {
      fill_column(r - 1);
      return;
    }
    for (int p = start; p <= m - (r - c); ++p) {
      pivots[c] = p;
      choose(c + 1, p + 1);
    }
  };
  choose(0, 0);
}

std::vector<Submodule> enumerate_primitive(int m, int r, long bound) {
  std::vector<Submodule> out;
  for_each_primitive(m, r, bound, [&](const Submodule& d) {
    out.push_back(d);
    return true;
  });
  return out;
}

bool minkowski_check(const LatticeBasis& g, const Submodule& d, const SvpOptions& options) {
  if (g.rank() != g.dim() || g.dim() != d.dim()) throw Error(Errc::InvalidInput, "minkowski_check needs a full-rank g of matching size");
  Scalar delta = shortest_vector(g, options).norm;
  ScalarMatrix image = g.matrix() * to_scalar(d.generators());
  Scalar cov = covolume(image);
  const long r = d.rank();
  return pow_base(delta, r) <= pow_base(Scalar(2), r) * cov;
}

}  // namespace singlab
