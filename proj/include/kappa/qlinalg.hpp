#pragma once

#include "kappa/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kappa {

// Dense column vector over Q.
using QVec = std::vector<Rat>;

QVec qvec_zero(int n);
QVec qvec_add(const QVec& a, const QVec& b);
QVec qvec_sub(const QVec& a, const QVec& b);
QVec qvec_scale(const Rat& c, const QVec& a);
bool qvec_is_zero(const QVec& a);
// Integral entries, content 1, first nonzero entry positive.
QVec qvec_primitive(const QVec& a);

// Sparse exact matrix. Entries map stores nonzero values only.
class QMatrix {
  public:
    QMatrix() : rows_(0), cols_(0) {}
    QMatrix(int rows, int cols);
    static QMatrix identity(int n);
    static QMatrix from_columns(int rows, const std::vector<QVec>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rat get(int r, int c) const;
    void set(int r, int c, const Rat& v);
    const std::map<std::pair<int, int>, Rat>& entries() const { return entries_; }

    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix scaled(const Rat& c) const;
    QMatrix transpose() const;
    QVec apply(const QVec& v) const;
    QVec column(int c) const;
    bool is_zero() const { return entries_.empty(); }
    bool operator==(const QMatrix& o) const;

  private:
    int rows_, cols_;
    std::map<std::pair<int, int>, Rat> entries_;
};

struct KernelImage {
    std::vector<QVec> kernel;  // deterministic: free columns in ascending order
    std::vector<QVec> image;   // pivot columns of the input, ascending
};

// Gauss elimination with leftmost-column / topmost-row pivoting; exact.
KernelImage kernel_image(const QMatrix& m);
int rank_of(const QMatrix& m);

// Solves A x = b; nullopt when inconsistent.
std::optional<QVec> solve_linear(const QMatrix& A, const QVec& b);
// Expresses v in a given spanning list; nullopt when v is outside the span.
std::optional<QVec> coordinates_in_span(const std::vector<QVec>& span, const QVec& v);

// Ordered basis with labels and integer (homological or cohomological) degrees.
class GradedVectorSpace {
  public:
    GradedVectorSpace() = default;
    GradedVectorSpace(std::vector<std::string> labels, std::vector<int> degrees);

    int dim() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int i) const { return labels_.at(i); }
    int degree(int i) const { return degrees_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<int>& degrees() const { return degrees_; }
    std::optional<int> index_of(const std::string& label) const;
    std::vector<int> indices_in_degree(int d) const;
    std::map<int, int> dims_by_degree() const;
    bool operator==(const GradedVectorSpace& o) const;

  private:
    std::vector<std::string> labels_;
    std::vector<int> degrees_;
    std::map<std::string, int> index_;
};

std::string show_vec(const QVec& v, const GradedVectorSpace& space);

// Differential drops degree by one; the constructor rejects entries outside
// that shape and any d with d*d != 0.
class ChainComplex {
  public:
    ChainComplex(GradedVectorSpace space, QMatrix d);

    const GradedVectorSpace& space() const { return space_; }
    const QMatrix& differential() const { return d_; }
    // Block C_degree -> C_{degree-1} against indices_in_degree orderings.
    QMatrix block(int degree) const;

  private:
    GradedVectorSpace space_;
    QMatrix d_;
};

// Homology in one degree with chosen cycle representatives, all in full-space
// coordinates. coords() reduces a cycle to the representative basis modulo
// boundaries and rejects non-cycles.
struct HomologyData {
    int degree = 0;
    std::vector<QVec> reps;
    std::vector<QVec> boundaries;
    std::vector<int> degree_indices;
    int space_dim = 0;

    int dim() const { return static_cast<int>(reps.size()); }
    QVec coords(const QVec& cycle) const;
};

HomologyData homology_data(const ChainComplex& c, int degree);
GradedVectorSpace homology(const ChainComplex& c, int degree);
std::map<int, int> homology_dims(const ChainComplex& c);

}  // namespace kappa
