#pragma once

#include "kappa/qlinalg.hpp"

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace kappa {

struct LieGenerator {
    std::string name;
    int degree = 0;
    bool operator==(const LieGenerator&) const = default;
};

// Key of a basis monomial. Ordinary keys hold a Lyndon word w over generator
// indices and denote the standard bracketing b(w); square keys hold w w for an
// odd-degree Lyndon w and denote [b(w), b(w)]. Ordering is (weight, word, sq),
// which is also the enumeration and printing order.
struct MonoKey {
    std::vector<int> word;
    bool sq = false;

    int weight() const { return static_cast<int>(word.size()); }
    bool operator==(const MonoKey&) const = default;
    std::strong_ordering operator<=>(const MonoKey& o) const {
        if (auto c = word.size() <=> o.word.size(); c != 0) return c;
        if (auto c = word <=> o.word; c != 0) return c;
        return sq <=> o.sq;
    }
};

class FreeGradedLie;
using FreeLiePtr = std::shared_ptr<const FreeGradedLie>;

// Element as a finite combination of basis monomials. The truncated flag
// records that some weight-cap overflow was dropped while producing it.
class LieElement {
  public:
    LieElement() = default;

    const FreeLiePtr& owner() const { return owner_; }
    const std::map<MonoKey, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool truncated() const { return truncated_; }
    bool is_homogeneous() const;
    // Common degree of all terms; nullopt when zero or inhomogeneous.
    std::optional<int> degree() const;
    int max_weight() const;

    LieElement operator+(const LieElement& o) const;
    LieElement operator-(const LieElement& o) const;
    LieElement operator-() const;
    LieElement scaled(const Rat& c) const;
    // Same value with the truncated flag OR'd in.
    LieElement marked_truncated(bool t) const;
    // Equality of coefficients; the truncated flag is not part of the value.
    bool operator==(const LieElement& o) const;

    std::string show() const;

  private:
    friend class FreeGradedLie;
    friend LieElement bracket(const LieElement& a, const LieElement& b);

    FreeLiePtr owner_;
    std::map<MonoKey, Rat> terms_;
    bool truncated_ = false;
};

class FreeGradedLie : public std::enable_shared_from_this<FreeGradedLie> {
  public:
    static FreeLiePtr make(std::vector<LieGenerator> gens, int weight_cap);

    const std::vector<LieGenerator>& generators() const { return gens_; }
    int weight_cap() const { return weight_cap_; }
    std::optional<int> generator_index(const std::string& name) const;
    // Same generator list (names and degrees) and the same weight cap.
    bool structurally_equal(const FreeGradedLie& o) const;

    int degree_of(const MonoKey& k) const;
    bool is_basis_key(const MonoKey& k) const;
    // Standard factorization children: Std(uv) -> (b(u), b(v)); Sq(w) -> (b(w), b(w)).
    std::pair<MonoKey, MonoKey> children(const MonoKey& k) const;
    std::string show_key(const MonoKey& k) const;

    // All basis keys with weight <= max_weight (and degree <= max_degree when
    // given), sorted by (weight, word, sq). max_weight is clamped to the cap.
    std::vector<MonoKey> basis(int max_weight, std::optional<int> max_degree = std::nullopt) const;
    std::vector<MonoKey> basis_in_degree(int degree, int max_weight) const;
    std::map<int, int> graded_dims(int max_weight, int max_degree) const;

    LieElement zero() const;
    LieElement gen(const std::string& name) const;
    LieElement mono(const MonoKey& k) const;
    LieElement element(const std::map<MonoKey, Rat>& terms) const;

  private:
    friend LieElement bracket(const LieElement& a, const LieElement& b);

    struct Canon {
        std::map<MonoKey, Rat> terms;
        bool truncated = false;
    };
    Canon mono_bracket(const MonoKey& a, const MonoKey& b) const;
    Canon mono_bracket_cached(const MonoKey& a, const MonoKey& b) const;
    // [b(k), e] for canonical terms e, expanded linearly.
    Canon left_bracket(const MonoKey& k, const Canon& e) const;

    std::vector<LieGenerator> gens_;
    int weight_cap_ = 1;

    mutable std::recursive_mutex mu_;
    mutable std::map<std::pair<MonoKey, MonoKey>, Canon> cache_;
    mutable std::set<std::pair<MonoKey, MonoKey>> in_progress_;
};

// Graded bracket; owners must be structurally equal. Terms beyond the weight
// cap are dropped and the result is marked truncated.
LieElement bracket(const LieElement& a, const LieElement& b);

// Canonical form of a textual bracket expression over the generators, e.g.
// "[u,[u,v]] - 3/2*[v,u]". Unknown generators and malformed input throw.
LieElement canonical_form(const FreeLiePtr& L, const std::string& expr);

// Bracket-preserving degree-0 map fixed by generator images.
class LieMorphism {
  public:
    static LieMorphism make(FreeLiePtr source, FreeLiePtr target,
                            std::map<std::string, LieElement> images);
    const FreeLiePtr& source() const { return source_; }
    const FreeLiePtr& target() const { return target_; }
    const LieElement& image_of(const std::string& gen) const;
    LieElement apply(const LieElement& e) const;

  private:
    FreeLiePtr source_, target_;
    std::map<std::string, LieElement> images_;
};

// Degree-k generator-determined derivation: D[a,b] = [Da,b] + (-1)^{k|a|}[a,Db].
class LieDerivation {
  public:
    static LieDerivation make(FreeLiePtr L, int degree, std::map<std::string, LieElement> images);
    int degree() const { return degree_; }
    const FreeLiePtr& algebra() const { return L_; }
    LieElement apply(const LieElement& e) const;
    LieElement apply_key(const MonoKey& k) const;

  private:
    FreeLiePtr L_;
    int degree_ = 0;
    std::map<std::string, LieElement> images_;
};

struct FreeProduct {
    FreeLiePtr algebra;
    std::vector<LieMorphism> inclusions;
};

// Coproduct of free graded Lie algebras: free on the disjoint union of
// generators, renamed name -> name + tag. Default cap: max of the factor caps.
FreeProduct free_product(const std::vector<FreeLiePtr>& factors, const std::vector<std::string>& tags,
                         std::optional<int> weight_cap = std::nullopt);

// Quotient by the (nil_class+1)-st lower central series term, realized as the
// same presentation with weight cap min(cap, nil_class).
FreeLiePtr lcs_quotient(const FreeLiePtr& L, int nil_class);

// Reinterprets an element in a structurally compatible algebra (same
// generators), dropping monomials beyond the target cap.
LieElement truncate_to(const FreeLiePtr& target, const LieElement& e);

}  // namespace kappa
