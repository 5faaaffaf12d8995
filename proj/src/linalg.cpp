#include "rigmon/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace rigmon {

// ---------------------------------------------------------------------------
// Matrix basics

Matrix::Matrix(ScalarField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

Matrix Matrix::identity(ScalarField field, std::size_t n) { return scalar(field, n, field.one()); }

Matrix Matrix::scalar(ScalarField field, std::size_t n, const Scalar& value) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = value;
  return m;
}

Matrix Matrix::diagonal(ScalarField field, const Vector& entries) {
  Matrix m(field, entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Matrix Matrix::from_rows(ScalarField field, const std::vector<Vector>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionMismatch("ragged rows");
    for (std::size_t j = 0; j < cols; ++j) {
      if (rows[i][j].field() != field) throw FieldMismatch();
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

Matrix Matrix::from_columns(ScalarField field, const std::vector<Vector>& columns) {
  return from_rows(field, columns).transpose();
}

Matrix Matrix::parse(ScalarField field, const std::vector<std::vector<std::string>>& rows) {
  std::vector<Vector> values;
  for (const auto& r : rows) {
    Vector v;
    for (const auto& text : r) v.push_back(field.parse(text));
    values.push_back(std::move(v));
  }
  return from_rows(field, values);
}

Vector Matrix::column(std::size_t j) const {
  Vector v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

Vector Matrix::row(std::size_t i) const { return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }

void Matrix::set_column(std::size_t j, const Vector& v) {
  if (v.size() != rows_) throw DimensionMismatch("column length");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix shapes differ");
  if (a.field() != b.field()) throw FieldMismatch();
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k)
    if (!b.data_[k].is_zero()) r.data_[k] += b.data_[k];
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k)
    if (!b.data_[k].is_zero()) r.data_[k] -= b.data_[k];
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("inner dimensions differ");
  if (a.field() != b.field()) throw FieldMismatch();
  Matrix r(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Scalar& x = a(i, k);
      if (x.is_zero()) continue;
      const bool unit = x.is_one();
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Scalar& y = b(k, j);
        if (y.is_zero()) continue;
        if (unit)
          r(i, j) += y;
        else
          r(i, j) += x * y;
      }
    }
  return r;
}

Matrix operator*(const Scalar& s, const Matrix& a) {
  if (s.field() != a.field()) throw FieldMismatch();
  Matrix r = a;
  for (auto& x : r.data_)
    if (!x.is_zero()) x = s * x;
  return r;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector dimensions differ");
  Vector r(a.rows(), a.field().zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_zero() && !v[j].is_zero()) r[i] += a(i, j) * v[j];
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.data_)
    if (!x.is_zero()) x = -x;
  return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.field() != b.field()) return false;
  for (std::size_t k = 0; k < a.data_.size(); ++k)
    if (a.data_[k] != b.data_[k]) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix r(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) throw DimensionMismatch("block out of range");
  Matrix r(field_, nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) r(i, j) = (*this)(row0 + i, col0 + j);
  return r;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& x) { return x.is_zero(); });
}

bool Matrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const Scalar& x = (*this)(i, j);
      if (i == j ? !x.is_one() : !x.is_zero()) return false;
    }
  return true;
}

std::optional<Scalar> Matrix::as_scalar() const {
  if (!is_square() || rows_ == 0) return std::nullopt;
  const Scalar c = (*this)(0, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const Scalar& x = (*this)(i, j);
      if (i == j ? x != c : !x.is_zero()) return std::nullopt;
    }
  return c;
}

std::vector<std::vector<std::string>> Matrix::render() const {
  std::vector<std::vector<std::string>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i].push_back((*this)(i, j).render());
  return out;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  auto cells = render();
  std::vector<std::size_t> width(cols_, 1);
  for (const auto& r : cells)
    for (std::size_t j = 0; j < cols_; ++j) width[j] = std::max(width[j], r[j].size());
  for (const auto& r : cells) {
    os << "[ ";
    for (std::size_t j = 0; j < cols_; ++j) {
      os << r[j] << std::string(width[j] - r[j].size(), ' ');
      os << (j + 1 < cols_ ? " | " : " ");
    }
    os << "]\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Elimination

namespace {

// Pivot choice: smallest coefficient size in exact mode (limits growth),
// largest magnitude in approx mode (stability).
std::optional<std::size_t> choose_pivot(const Matrix& m, std::size_t col, std::size_t from) {
  std::optional<std::size_t> best;
  if (m.field().is_exact()) {
    std::size_t best_size = 0;
    for (std::size_t r = from; r < m.rows(); ++r) {
      const Scalar& x = m(r, col);
      if (x.is_zero()) continue;
      std::size_t s = x.size_hint();
      if (!best || s < best_size) {
        best = r;
        best_size = s;
      }
    }
  } else {
    double best_mag = 0;
    for (std::size_t r = from; r < m.rows(); ++r) {
      const Scalar& x = m(r, col);
      if (x.is_zero()) continue;
      double mag = x.magnitude();
      if (!best || mag > best_mag) {
        best = r;
        best_mag = mag;
      }
    }
  }
  return best;
}

void swap_rows(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

// row[target] -= factor * row[source], from column `from` on.
void eliminate_row(Matrix& m, std::size_t target, std::size_t source, const Scalar& factor, std::size_t from) {
  for (std::size_t j = from; j < m.cols(); ++j) {
    const Scalar& s = m(source, j);
    if (s.is_zero()) continue;
    m(target, j) -= factor * s;
  }
}

struct ForwardResult {
  std::vector<std::size_t> pivots;
  std::size_t swaps = 0;
};

// In-place echelon form; with `reduce`, pivots are normalized to 1 and
// eliminated above as well.
ForwardResult eliminate(Matrix& m, bool reduce) {
  ForwardResult result;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    auto p = choose_pivot(m, col, row);
    if (!p) continue;
    if (*p != row) {
      swap_rows(m, *p, row);
      ++result.swaps;
    }
    Scalar inv = m(row, col).inverse();
    if (reduce) {
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(row, j) *= inv;
      m(row, col) = m.field().one();
      inv = m.field().one();
    }
    for (std::size_t r = reduce ? 0 : row + 1; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      Scalar factor = m(r, col) * inv;
      eliminate_row(m, r, row, factor, col);
      m(r, col) = m.field().zero();
    }
    result.pivots.push_back(col);
    ++row;
  }
  return result;
}

}  // namespace

Echelon row_reduce(const Matrix& m) {
  Echelon e{m, {}};
  e.pivots = eliminate(e.reduced, true).pivots;
  return e;
}

std::size_t rank(const Matrix& m) {
  Matrix work = m;
  return eliminate(work, false).pivots.size();
}

std::vector<Vector> kernel_basis(const Matrix& m) {
  Echelon e = row_reduce(m);
  const ScalarField f = m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      const Scalar& x = e.reduced(r, free);
      if (!x.is_zero()) v[e.pivots[r]] = -x;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length");
  Matrix aug(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Echelon e = row_reduce(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  Vector x(a.cols(), a.field().zero());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, a.cols());
  return x;
}

Matrix stack(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) throw DimensionMismatch("nothing to stack");
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != blocks.front().cols()) throw DimensionMismatch("stacked blocks differ in width");
    rows += b.rows();
  }
  Matrix r(blocks.front().field(), rows, blocks.front().cols());
  std::size_t at = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) r(at + i, j) = b(i, j);
    at += b.rows();
  }
  return r;
}

Matrix Matrix::inverse() const {
  if (!is_square()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = rows_;
  Matrix aug(field_, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = field_.one();
  }
  auto pivots = eliminate(aug, true).pivots;
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw SingularMatrix();
  return aug.block(0, n, n, n);
}

Matrix Matrix::pow(long exponent) const {
  if (!is_square()) throw DimensionMismatch("power of a non-square matrix");
  Matrix base = exponent < 0 ? inverse() : *this;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-(exponent + 1)) + 1UL : static_cast<unsigned long>(exponent);
  Matrix result = identity(field_, rows_);
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Scalar Matrix::trace() const {
  if (!is_square()) throw DimensionMismatch("trace of a non-square matrix");
  Scalar t = field_.zero();
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

Scalar Matrix::determinant() const {
  if (!is_square()) throw DimensionMismatch("determinant of a non-square matrix");
  Matrix work = *this;
  auto result = eliminate(work, false);
  if (result.pivots.size() < rows_) return field_.zero();
  Scalar det = result.swaps % 2 == 0 ? field_.one() : -field_.one();
  for (std::size_t i = 0; i < rows_; ++i) det *= work(i, i);
  return det;
}

Matrix product(ScalarField field, std::size_t n, const std::vector<Matrix>& factors) {
  Matrix r = Matrix::identity(field, n);
  for (const auto& f : factors) r = r * f;
  return r;
}

// ---------------------------------------------------------------------------
// Pseudo-reflections

Matrix RankOneDecomposition::reconstruct() const {
  const ScalarField f = u.front().field();
  const std::size_t m = u.size();
  Matrix r = Matrix::identity(f, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (selector) {
      r(i, *selector) -= u[i];
    } else {
      for (std::size_t j = 0; j < m; ++j) r(i, j) -= u[i] * row[j];
    }
  }
  return r;
}

std::optional<RankOneDecomposition> is_pseudo_reflection(const Matrix& m) {
  if (!m.is_square()) throw DimensionMismatch("pseudo-reflection test needs a square matrix");
  const ScalarField f = m.field();
  const std::size_t n = m.rows();
  Scalar det = m.determinant();
  if (det.is_zero()) throw SingularMatrix();
  Matrix d = m - Matrix::identity(f, n);
  if (rank(d) != 1 || det.is_one()) return std::nullopt;
  std::vector<std::size_t> nonzero_cols;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      if (!d(i, j).is_zero()) {
        nonzero_cols.push_back(j);
        break;
      }
  }
  RankOneDecomposition out;
  out.special_eigenvalue = det;
  const std::size_t c = nonzero_cols.front();
  out.u = d.column(c);
  for (auto& x : out.u) x = -x;
  if (nonzero_cols.size() == 1) {
    out.selector = c;
    return out;
  }
  // D = col_c * w^T with w_j = D[p][j] / D[p][c] for any row p where D[p][c] != 0.
  std::size_t p = 0;
  while (d(p, c).is_zero()) ++p;
  Scalar inv = d(p, c).inverse();
  out.row.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.row.push_back(d(p, j) * inv);
  return out;
}

// ---------------------------------------------------------------------------
// Centralizer

std::size_t centralizer_dim(const Matrix& m) {
  if (!m.is_square()) throw DimensionMismatch("centralizer of a non-square matrix");
  const std::size_t n = m.rows();
  const ScalarField f = m.field();
  // Unknown B_{kj} sits at index k*n + j; row (i,j) of the Sylvester matrix
  // is the (i,j) entry of MB - BM = sum_k M_ik B_kj - sum_k B_ik M_kj.
  Matrix sylvester(f, n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t k = 0; k < n; ++k) {
        if (!m(i, k).is_zero()) sylvester(row, k * n + j) += m(i, k);
        if (!m(k, j).is_zero()) sylvester(row, i * n + k) -= m(k, j);
      }
    }
  return n * n - rank(sylvester);
}

// ---------------------------------------------------------------------------
// Spectrum verification

SpectrumReport verify_semisimple_spectrum(const Matrix& m, const std::vector<SpectrumClaim>& spectrum) {
  if (!m.is_square()) throw DimensionMismatch("spectrum of a non-square matrix");
  std::size_t total = 0;
  for (const auto& c : spectrum) total += c.multiplicity;
  if (total != m.rows())
    throw LinalgError("claimed multiplicities sum to " + std::to_string(total) + ", dimension is " +
                      std::to_string(m.rows()));
  for (std::size_t a = 0; a < spectrum.size(); ++a)
    for (std::size_t b = a + 1; b < spectrum.size(); ++b)
      if (spectrum[a].value == spectrum[b].value) throw LinalgError("claimed eigenvalues are not distinct");

  const ScalarField f = m.field();
  const std::size_t n = m.rows();
  SpectrumReport report;
  Matrix prod = Matrix::identity(f, n);
  std::ostringstream detail;
  bool dims_ok = true;
  for (const auto& c : spectrum) {
    Matrix shifted = m - Matrix::scalar(f, n, c.value);
    prod = prod * shifted;
    std::size_t dim = n - rank(shifted);
    report.kernel_dims.push_back(dim);
    if (dim != c.multiplicity) {
      dims_ok = false;
      detail << "dim ker(M - (" << c.value.render() << ")I) = " << dim << ", claimed " << c.multiplicity << "; ";
    }
  }
  report.annihilated = prod.is_zero();
  if (!report.annihilated) detail << "product of (M - lambda I) over the claimed spectrum is nonzero; ";
  report.ok = report.annihilated && dims_ok;
  report.detail = report.ok ? "spectrum verified" : detail.str();
  return report;
}

std::vector<Vector> eigenspace_basis(const Matrix& m, const Scalar& lambda) {
  if (!m.is_square()) throw DimensionMismatch("eigenspace of a non-square matrix");
  std::vector<Vector> basis = kernel_basis(m - Matrix::scalar(m.field(), m.rows(), lambda));
  std::vector<std::pair<std::size_t, Vector>> keyed;
  for (auto& v : basis) {
    std::size_t first = 0;
    while (v[first].is_zero()) ++first;
    Scalar inv = v[first].inverse();
    for (auto& x : v)
      if (!x.is_zero()) x *= inv;
    v[first] = m.field().one();
    keyed.emplace_back(first, std::move(v));
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vector> out;
  for (auto& [k, v] : keyed) out.push_back(std::move(v));
  return out;
}

// ---------------------------------------------------------------------------
// Block assembly

Matrix block_assemble(ScalarField field, const std::vector<std::size_t>& row_sizes,
                      const std::vector<std::size_t>& col_sizes, const std::vector<std::vector<Block>>& grid) {
  if (grid.size() != row_sizes.size()) throw DimensionMismatch("block grid row count");
  std::size_t rows = 0, cols = 0;
  for (auto s : row_sizes) rows += s;
  for (auto s : col_sizes) cols += s;
  Matrix out(field, rows, cols);
  std::size_t r0 = 0;
  for (std::size_t bi = 0; bi < grid.size(); ++bi) {
    if (grid[bi].size() != col_sizes.size()) throw DimensionMismatch("block grid column count");
    std::size_t c0 = 0;
    for (std::size_t bj = 0; bj < col_sizes.size(); ++bj) {
      const Block& b = grid[bi][bj];
      if (const auto* s = std::get_if<ScalarBlock>(&b)) {
        if (row_sizes[bi] != col_sizes[bj]) throw DimensionMismatch("scalar block must be square");
        for (std::size_t i = 0; i < row_sizes[bi]; ++i) out(r0 + i, c0 + i) = s->value;
      } else if (const auto* m = std::get_if<Matrix>(&b)) {
        if (m->rows() != row_sizes[bi] || m->cols() != col_sizes[bj])
          throw DimensionMismatch("block (" + std::to_string(bi) + "," + std::to_string(bj) + ") has size " +
                                  std::to_string(m->rows()) + "x" + std::to_string(m->cols()));
        for (std::size_t i = 0; i < m->rows(); ++i)
          for (std::size_t j = 0; j < m->cols(); ++j) out(r0 + i, c0 + j) = (*m)(i, j);
      }
      c0 += col_sizes[bj];
    }
    r0 += row_sizes[bi];
  }
  return out;
}

Matrix direct_sum(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) throw DimensionMismatch("empty direct sum");
  std::vector<std::size_t> sizes;
  for (const auto& b : blocks) {
    if (!b.is_square()) throw DimensionMismatch("direct sum of non-square blocks");
    sizes.push_back(b.rows());
  }
  std::vector<std::vector<Block>> grid(blocks.size(), std::vector<Block>(blocks.size(), ZeroBlock{}));
  for (std::size_t i = 0; i < blocks.size(); ++i) grid[i][i] = blocks[i];
  return block_assemble(blocks.front().field(), sizes, sizes, grid);
}

// ---------------------------------------------------------------------------
// Factorization into standard pseudo-reflections

std::vector<RankOneDecomposition> factor_pseudo_reflections(const Matrix& a,
                                                            const std::vector<std::size_t>& directions,
                                                            const Vector& eigenvalues) {
  if (!a.is_square()) throw DimensionMismatch("factorization of a non-square matrix");
  if (directions.size() != eigenvalues.size()) throw DimensionMismatch("directions and eigenvalues differ in length");
  const ScalarField f = a.field();
  const std::size_t m = a.rows();
  std::vector<bool> named(m, false);
  for (auto c : directions) {
    if (c >= m) throw LinalgError("direction index out of range");
    if (named[c]) throw LinalgError("directions must be distinct");
    named[c] = true;
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (named[j]) continue;
    for (std::size_t i = 0; i < m; ++i)
      if (i == j ? !a(i, j).is_one() : !a(i, j).is_zero())
        throw LinalgError("matrix differs from the identity outside the named columns (column " + std::to_string(j) +
                          ")");
  }
  // A e_c = X_1 ... X_i e_c = Y (e_c - v_i) with Y = X_1 ... X_{i-1}, which fixes e_c.
  std::vector<RankOneDecomposition> factors;
  Matrix y = Matrix::identity(f, m);
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const std::size_t c = directions[i];
    Vector target = y.inverse() * a.column(c);
    RankOneDecomposition d;
    d.u = Vector(m, f.zero());
    for (std::size_t r = 0; r < m; ++r) d.u[r] = (r == c ? f.one() : f.zero()) - target[r];
    d.selector = c;
    d.special_eigenvalue = f.one() - d.u[c];
    Matrix x = d.reconstruct();
    auto check = is_pseudo_reflection(x);
    if (!check)
      throw LinalgError("factor " + std::to_string(i + 1) + " is not a pseudo-reflection");
    if (check->special_eigenvalue != eigenvalues[i])
      throw LinalgError("factor " + std::to_string(i + 1) + " has special eigenvalue " +
                        check->special_eigenvalue.render() + ", expected " + eigenvalues[i].render());
    y = y * x;
    factors.push_back(std::move(d));
  }
  if (y != a) throw LinalgError("product of the factors does not reproduce the matrix");
  return factors;
}

}  // namespace rigmon
