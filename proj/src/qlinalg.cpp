#include "kappa/qlinalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace kappa {

Rat parse_rat(const std::string& s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw std::invalid_argument("empty rational literal");
    auto digits = [](const std::string& p) {
        if (p.empty()) return false;
        std::size_t i = (p[0] == '-' || p[0] == '+') ? 1 : 0;
        if (i == p.size()) return false;
        for (; i < p.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(p[i]))) return false;
        return true;
    };
    auto slash = t.find('/');
    if (slash == std::string::npos) {
        if (!digits(t)) throw std::invalid_argument("bad rational literal: " + s);
    } else {
        std::string num = t.substr(0, slash), den = t.substr(slash + 1);
        if (!digits(num) || !digits(den)) throw std::invalid_argument("bad rational literal: " + s);
        if (mpz_class(den) == 0) throw std::invalid_argument("zero denominator: " + s);
    }
    Rat r(t);
    r.canonicalize();
    return r;
}

std::string show_rat(const Rat& r) { return r.get_str(); }

Rat factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative");
    mpz_class acc = 1;
    for (int i = 2; i <= n; ++i) acc *= i;
    return Rat(acc);
}

QVec qvec_zero(int n) { return QVec(static_cast<std::size_t>(n), Rat(0)); }

QVec qvec_add(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("qvec_add: size mismatch");
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

QVec qvec_sub(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("qvec_sub: size mismatch");
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

QVec qvec_scale(const Rat& c, const QVec& a) {
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

bool qvec_is_zero(const QVec& a) {
    return std::all_of(a.begin(), a.end(), [](const Rat& x) { return is_zero(x); });
}

QVec qvec_primitive(const QVec& a) {
    mpz_class lcm_den = 1;
    for (const Rat& x : a)
        if (!is_zero(x)) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den().get_mpz_t());
    mpz_class gcd_num = 0;
    for (const Rat& x : a) {
        if (is_zero(x)) continue;
        mpz_class n = x.get_num() * (lcm_den / x.get_den());
        mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), n.get_mpz_t());
    }
    if (gcd_num == 0) return a;
    Rat scale(lcm_den, gcd_num);
    scale.canonicalize();
    QVec r = qvec_scale(scale, a);
    for (const Rat& x : r) {
        if (is_zero(x)) continue;
        if (sgn(x) < 0) r = qvec_scale(Rat(-1), r);
        break;
    }
    return r;
}

QMatrix::QMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
}

QMatrix QMatrix::identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, Rat(1));
    return m;
}

QMatrix QMatrix::from_columns(int rows, const std::vector<QVec>& cols) {
    QMatrix m(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
        if (static_cast<int>(cols[c].size()) != rows)
            throw std::invalid_argument("from_columns: column length mismatch");
        for (int r = 0; r < rows; ++r) m.set(r, c, cols[c][r]);
    }
    return m;
}

Rat QMatrix::get(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("QMatrix::get");
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Rat(0) : it->second;
}

void QMatrix::set(int r, int c, const Rat& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("QMatrix::set");
    if (kappa::is_zero(v))
        entries_.erase({r, c});
    else
        entries_[{r, c}] = v;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix add: shape mismatch");
    QMatrix m = *this;
    for (const auto& [rc, v] : o.entries_) m.set(rc.first, rc.second, m.get(rc.first, rc.second) + v);
    return m;
}

QMatrix QMatrix::operator-(const QMatrix& o) const { return *this + o.scaled(Rat(-1)); }

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix mul: shape mismatch");
    QMatrix m(rows_, o.cols_);
    std::map<std::pair<int, int>, Rat> acc;
    for (const auto& [rc, v] : entries_)
        for (const auto& [rc2, w] : o.entries_)
            if (rc.second == rc2.first) acc[{rc.first, rc2.second}] += v * w;
    for (const auto& [rc, v] : acc)
        if (!kappa::is_zero(v)) m.set(rc.first, rc.second, v);
    return m;
}

QMatrix QMatrix::scaled(const Rat& c) const {
    QMatrix m(rows_, cols_);
    if (kappa::is_zero(c)) return m;
    for (const auto& [rc, v] : entries_) m.set(rc.first, rc.second, c * v);
    return m;
}

QMatrix QMatrix::transpose() const {
    QMatrix m(cols_, rows_);
    for (const auto& [rc, v] : entries_) m.set(rc.second, rc.first, v);
    return m;
}

QVec QMatrix::apply(const QVec& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("matrix apply: size mismatch");
    QVec r = qvec_zero(rows_);
    for (const auto& [rc, w] : entries_) r[rc.first] += w * v[rc.second];
    return r;
}

QVec QMatrix::column(int c) const {
    QVec r = qvec_zero(rows_);
    for (int i = 0; i < rows_; ++i) r[i] = get(i, c);
    return r;
}

bool QMatrix::operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

namespace {

struct Echelon {
    std::vector<QVec> rows;       // echelon rows, pivots normalized to 1, reduced upward
    std::vector<int> pivot_cols;  // pivot column of row i
};

// Row-reduced echelon form; column scan left to right, rows top to bottom.
Echelon rref(const QMatrix& m) {
    std::vector<QVec> rows(static_cast<std::size_t>(m.rows()), qvec_zero(m.cols()));
    for (const auto& [rc, v] : m.entries()) rows[rc.first][rc.second] = v;
    Echelon e;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < m.rows(); ++i)
            if (!is_zero(rows[i][c])) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[r], rows[piv]);
        Rat inv = Rat(1) / rows[r][c];
        for (int j = c; j < m.cols(); ++j) rows[r][j] *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || is_zero(rows[i][c])) continue;
            Rat f = rows[i][c];
            for (int j = c; j < m.cols(); ++j) rows[i][j] -= f * rows[r][j];
        }
        e.pivot_cols.push_back(c);
        ++r;
    }
    rows.resize(e.pivot_cols.size());
    e.rows = std::move(rows);
    return e;
}

}  // namespace

KernelImage kernel_image(const QMatrix& m) {
    Echelon e = rref(m);
    KernelImage ki;
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (int c : e.pivot_cols) is_pivot[c] = true;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        QVec v = qvec_zero(m.cols());
        v[f] = Rat(1);
        for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) v[e.pivot_cols[i]] = -e.rows[i][f];
        ki.kernel.push_back(std::move(v));
    }
    for (int c : e.pivot_cols) ki.image.push_back(m.column(c));
    return ki;
}

int rank_of(const QMatrix& m) { return static_cast<int>(rref(m).pivot_cols.size()); }

std::optional<QVec> solve_linear(const QMatrix& A, const QVec& b) {
    if (static_cast<int>(b.size()) != A.rows()) throw std::invalid_argument("solve_linear: size mismatch");
    QMatrix aug(A.rows(), A.cols() + 1);
    for (const auto& [rc, v] : A.entries()) aug.set(rc.first, rc.second, v);
    for (int r = 0; r < A.rows(); ++r) aug.set(r, A.cols(), b[r]);
    Echelon e = rref(aug);
    QVec x = qvec_zero(A.cols());
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) {
        if (e.pivot_cols[i] == A.cols()) return std::nullopt;  // pivot in the constant column
        x[e.pivot_cols[i]] = e.rows[i][A.cols()];
    }
    return x;
}

std::optional<QVec> coordinates_in_span(const std::vector<QVec>& span, const QVec& v) {
    int rows = static_cast<int>(v.size());
    return solve_linear(QMatrix::from_columns(rows, span), v);
}

GradedVectorSpace::GradedVectorSpace(std::vector<std::string> labels, std::vector<int> degrees)
    : labels_(std::move(labels)), degrees_(std::move(degrees)) {
    if (labels_.size() != degrees_.size())
        throw std::invalid_argument("GradedVectorSpace: labels/degrees length mismatch");
    for (int i = 0; i < dim(); ++i) {
        if (labels_[i].empty()) throw std::invalid_argument("GradedVectorSpace: empty label");
        if (!index_.emplace(labels_[i], i).second)
            throw std::invalid_argument("GradedVectorSpace: duplicate label " + labels_[i]);
    }
}

std::optional<int> GradedVectorSpace::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<int> GradedVectorSpace::indices_in_degree(int d) const {
    std::vector<int> r;
    for (int i = 0; i < dim(); ++i)
        if (degrees_[i] == d) r.push_back(i);
    return r;
}

std::map<int, int> GradedVectorSpace::dims_by_degree() const {
    std::map<int, int> r;
    for (int d : degrees_) ++r[d];
    return r;
}

bool GradedVectorSpace::operator==(const GradedVectorSpace& o) const {
    return labels_ == o.labels_ && degrees_ == o.degrees_;
}

std::string show_vec(const QVec& v, const GradedVectorSpace& space) {
    if (static_cast<int>(v.size()) != space.dim()) throw std::invalid_argument("show_vec: size mismatch");
    std::ostringstream out;
    bool first = true;
    for (int i = 0; i < space.dim(); ++i) {
        if (is_zero(v[i])) continue;
        Rat c = v[i];
        if (first) {
            if (sgn(c) < 0) out << "-";
        } else {
            out << (sgn(c) < 0 ? " - " : " + ");
        }
        Rat a = abs(c);
        if (a != 1) out << show_rat(a) << "*";
        out << space.label(i);
        first = false;
    }
    if (first) return "0";
    return out.str();
}

ChainComplex::ChainComplex(GradedVectorSpace space, QMatrix d) : space_(std::move(space)), d_(std::move(d)) {
    if (d_.rows() != space_.dim() || d_.cols() != space_.dim())
        throw std::invalid_argument("ChainComplex: differential shape mismatch");
    for (const auto& [rc, v] : d_.entries()) {
        (void)v;
        if (space_.degree(rc.first) != space_.degree(rc.second) - 1)
            throw std::invalid_argument("ChainComplex: differential entry " + space_.label(rc.first) +
                                        " <- " + space_.label(rc.second) + " is not degree -1");
    }
    if (!(d_ * d_).is_zero()) throw std::invalid_argument("ChainComplex: d*d != 0");
}

QMatrix ChainComplex::block(int degree) const {
    std::vector<int> src = space_.indices_in_degree(degree);
    std::vector<int> dst = space_.indices_in_degree(degree - 1);
    QMatrix b(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    for (int j = 0; j < static_cast<int>(src.size()); ++j)
        for (int i = 0; i < static_cast<int>(dst.size()); ++i) b.set(i, j, d_.get(dst[i], src[j]));
    return b;
}

QVec HomologyData::coords(const QVec& cycle) const {
    if (static_cast<int>(cycle.size()) != space_dim) throw std::invalid_argument("coords: size mismatch");
    std::vector<QVec> cols = boundaries;
    cols.insert(cols.end(), reps.begin(), reps.end());
    auto sol = coordinates_in_span(cols, cycle);
    if (!sol) throw std::invalid_argument("HomologyData::coords: vector is not a cycle in this degree");
    QVec r(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) r[i] = (*sol)[boundaries.size() + i];
    return r;
}

HomologyData homology_data(const ChainComplex& c, int degree) {
    HomologyData h;
    h.degree = degree;
    h.space_dim = c.space().dim();
    h.degree_indices = c.space().indices_in_degree(degree);
    QMatrix out = c.block(degree);
    QMatrix in = c.block(degree + 1);
    auto widen = [&](const QVec& local) {
        QVec full = qvec_zero(h.space_dim);
        for (std::size_t i = 0; i < h.degree_indices.size(); ++i) full[h.degree_indices[i]] = local[i];
        return full;
    };
    KernelImage cycles = kernel_image(out);
    KernelImage img = kernel_image(in);
    for (const QVec& b : img.image) h.boundaries.push_back(widen(b));
    // Extend the boundary basis to the cycle space; the extension vectors represent homology.
    std::vector<QVec> cols;
    for (const QVec& b : img.image) cols.push_back(b);
    int r = rank_of(QMatrix::from_columns(static_cast<int>(h.degree_indices.size()), cols));
    for (const QVec& z : cycles.kernel) {
        cols.push_back(z);
        int r2 = rank_of(QMatrix::from_columns(static_cast<int>(h.degree_indices.size()), cols));
        if (r2 > r) {
            h.reps.push_back(widen(qvec_primitive(z)));
            r = r2;
        } else {
            cols.pop_back();
        }
    }
    return h;
}

GradedVectorSpace homology(const ChainComplex& c, int degree) {
    HomologyData h = homology_data(c, degree);
    std::vector<std::string> labels;
    std::vector<int> degrees;
    for (int i = 0; i < h.dim(); ++i) {
        labels.push_back("h" + std::to_string(degree) + "_" + std::to_string(i));
        degrees.push_back(degree);
    }
    return GradedVectorSpace(labels, degrees);
}

std::map<int, int> homology_dims(const ChainComplex& c) {
    std::map<int, int> dims;
    for (const auto& [d, n] : c.space().dims_by_degree()) {
        (void)n;
        int h = homology_data(c, d).dim();
        if (h > 0) dims[d] = h;
    }
    return dims;
}

}  // namespace kappa
