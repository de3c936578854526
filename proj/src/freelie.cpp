#include "kappa/freelie.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace kappa {

namespace {

bool word_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool is_lyndon(const std::vector<int>& w) {
    if (w.empty()) return false;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::vector<int> suf(w.begin() + static_cast<long>(i), w.end());
        if (!word_less(w, suf)) return false;
    }
    return true;
}

// Index of the lexicographically smallest proper suffix, which is the right
// factor of the standard factorization.
std::size_t std_factor_cut(const std::vector<int>& w) {
    std::size_t best = 1;
    for (std::size_t i = 2; i < w.size(); ++i) {
        std::vector<int> a(w.begin() + static_cast<long>(i), w.end());
        std::vector<int> b(w.begin() + static_cast<long>(best), w.end());
        if (word_less(a, b)) best = i;
    }
    return best;
}

// All Lyndon words of length <= n over letters 0..k-1, lexicographic order.
std::vector<std::vector<int>> lyndon_words(int k, int n) {
    std::vector<std::vector<int>> res;
    if (k <= 0 || n <= 0) return res;
    std::vector<int> t{0};
    while (true) {
        if (static_cast<int>(t.size()) <= n) res.push_back(t);
        std::vector<int> s;
        for (int i = 0; i < n; ++i) s.push_back(t[static_cast<std::size_t>(i) % t.size()]);
        while (!s.empty() && s.back() == k - 1) s.pop_back();
        if (s.empty()) break;
        ++s.back();
        t = s;
    }
    return res;
}

int parity(int degree) { return ((degree % 2) + 2) % 2; }

}  // namespace

bool LieElement::is_homogeneous() const {
    if (terms_.empty()) return true;
    if (!owner_) throw std::logic_error("LieElement without owner");
    int d = owner_->degree_of(terms_.begin()->first);
    for (const auto& [k, c] : terms_) {
        (void)c;
        if (owner_->degree_of(k) != d) return false;
    }
    return true;
}

std::optional<int> LieElement::degree() const {
    if (terms_.empty()) return std::nullopt;
    if (!is_homogeneous()) return std::nullopt;
    return owner_->degree_of(terms_.begin()->first);
}

int LieElement::max_weight() const {
    int w = 0;
    for (const auto& [k, c] : terms_) {
        (void)c;
        w = std::max(w, k.weight());
    }
    return w;
}

namespace {
bool compatible_owners(const FreeLiePtr& a, const FreeLiePtr& b) {
    if (!a || !b) return true;
    return a == b || a->structurally_equal(*b);
}
}  // namespace

LieElement LieElement::operator+(const LieElement& o) const {
    if (!compatible_owners(owner_, o.owner_)) throw std::invalid_argument("LieElement add: owner mismatch");
    LieElement r = *this;
    if (!r.owner_) r.owner_ = o.owner_;
    r.truncated_ = truncated_ || o.truncated_;
    for (const auto& [k, c] : o.terms_) {
        Rat v = c;
        auto it = r.terms_.find(k);
        if (it != r.terms_.end()) v += it->second;
        if (kappa::is_zero(v))
            r.terms_.erase(k);
        else
            r.terms_[k] = v;
    }
    return r;
}

LieElement LieElement::operator-(const LieElement& o) const { return *this + o.scaled(Rat(-1)); }

LieElement LieElement::operator-() const { return scaled(Rat(-1)); }

LieElement LieElement::marked_truncated(bool t) const {
    LieElement r = *this;
    r.truncated_ = truncated_ || t;
    return r;
}

LieElement LieElement::scaled(const Rat& c) const {
    LieElement r;
    r.owner_ = owner_;
    r.truncated_ = truncated_;
    if (kappa::is_zero(c)) return r;
    for (const auto& [k, v] : terms_) r.terms_[k] = c * v;
    return r;
}

bool LieElement::operator==(const LieElement& o) const {
    if (!compatible_owners(owner_, o.owner_)) return false;
    return terms_ == o.terms_;
}

std::string LieElement::show() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (first) {
            if (sgn(c) < 0) out << "-";
        } else {
            out << (sgn(c) < 0 ? " - " : " + ");
        }
        Rat a = abs(c);
        if (a != 1) out << show_rat(a) << "*";
        out << owner_->show_key(k);
        first = false;
    }
    return out.str();
}

FreeLiePtr FreeGradedLie::make(std::vector<LieGenerator> gens, int weight_cap) {
    if (weight_cap < 1) throw std::invalid_argument("weight cap must be >= 1");
    std::set<std::string> seen;
    for (const auto& g : gens) {
        if (g.name.empty()) throw std::invalid_argument("empty generator name");
        if (!seen.insert(g.name).second) throw std::invalid_argument("duplicate generator " + g.name);
    }
    auto L = std::make_shared<FreeGradedLie>();
    L->gens_ = std::move(gens);
    L->weight_cap_ = weight_cap;
    return L;
}

std::optional<int> FreeGradedLie::generator_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(gens_.size()); ++i)
        if (gens_[i].name == name) return i;
    return std::nullopt;
}

bool FreeGradedLie::structurally_equal(const FreeGradedLie& o) const {
    return gens_ == o.gens_ && weight_cap_ == o.weight_cap_;
}

int FreeGradedLie::degree_of(const MonoKey& k) const {
    int d = 0;
    for (int i : k.word) d += gens_.at(static_cast<std::size_t>(i)).degree;
    return d;
}

bool FreeGradedLie::is_basis_key(const MonoKey& k) const {
    for (int i : k.word)
        if (i < 0 || i >= static_cast<int>(gens_.size())) return false;
    if (!k.sq) return is_lyndon(k.word);
    if (k.word.size() % 2 != 0 || k.word.empty()) return false;
    std::vector<int> half(k.word.begin(), k.word.begin() + static_cast<long>(k.word.size() / 2));
    std::vector<int> rest(k.word.begin() + static_cast<long>(k.word.size() / 2), k.word.end());
    if (half != rest || !is_lyndon(half)) return false;
    MonoKey base{half, false};
    return parity(degree_of(base)) == 1;
}

std::pair<MonoKey, MonoKey> FreeGradedLie::children(const MonoKey& k) const {
    if (k.weight() < 2) throw std::invalid_argument("children of a letter");
    if (k.sq) {
        std::vector<int> half(k.word.begin(), k.word.begin() + static_cast<long>(k.word.size() / 2));
        MonoKey base{half, false};
        return {base, base};
    }
    std::size_t cut = std_factor_cut(k.word);
    MonoKey l{std::vector<int>(k.word.begin(), k.word.begin() + static_cast<long>(cut)), false};
    MonoKey r{std::vector<int>(k.word.begin() + static_cast<long>(cut), k.word.end()), false};
    return {l, r};
}

std::string FreeGradedLie::show_key(const MonoKey& k) const {
    if (k.weight() == 1) return gens_.at(static_cast<std::size_t>(k.word[0])).name;
    auto [l, r] = children(k);
    return "[" + show_key(l) + "," + show_key(r) + "]";
}

std::vector<MonoKey> FreeGradedLie::basis(int max_weight, std::optional<int> max_degree) const {
    int wb = std::min(max_weight, weight_cap_);
    if (max_degree) {
        int min_deg = 0;
        bool all_pos = !gens_.empty();
        for (const auto& g : gens_) {
            if (g.degree < 1) all_pos = false;
            min_deg = (min_deg == 0) ? g.degree : std::min(min_deg, g.degree);
        }
        if (all_pos) wb = std::min(wb, *max_degree >= min_deg ? *max_degree / min_deg : 0);
    }
    std::vector<MonoKey> res;
    for (const auto& w : lyndon_words(static_cast<int>(gens_.size()), wb)) {
        MonoKey k{w, false};
        int d = degree_of(k);
        if (!max_degree || d <= *max_degree) res.push_back(k);
        if (parity(d) == 1 && 2 * k.weight() <= std::min(max_weight, weight_cap_)) {
            std::vector<int> ww = w;
            ww.insert(ww.end(), w.begin(), w.end());
            MonoKey sq{ww, true};
            if (!max_degree || 2 * d <= *max_degree) res.push_back(sq);
        }
    }
    std::sort(res.begin(), res.end());
    return res;
}

std::vector<MonoKey> FreeGradedLie::basis_in_degree(int degree, int max_weight) const {
    bool all_pos = !gens_.empty();
    for (const auto& g : gens_)
        if (g.degree < 1) all_pos = false;
    std::vector<MonoKey> all =
        all_pos ? basis(max_weight, degree) : basis(max_weight, std::nullopt);
    std::vector<MonoKey> res;
    for (const auto& k : all)
        if (degree_of(k) == degree) res.push_back(k);
    return res;
}

std::map<int, int> FreeGradedLie::graded_dims(int max_weight, int max_degree) const {
    std::map<int, int> dims;
    for (const auto& k : basis(max_weight, max_degree)) {
        int d = degree_of(k);
        if (d <= max_degree) ++dims[d];
    }
    return dims;
}

LieElement FreeGradedLie::zero() const {
    LieElement e;
    e.owner_ = shared_from_this();
    return e;
}

LieElement FreeGradedLie::gen(const std::string& name) const {
    auto i = generator_index(name);
    if (!i) throw std::invalid_argument("unknown generator: " + name);
    return mono(MonoKey{{*i}, false});
}

LieElement FreeGradedLie::mono(const MonoKey& k) const {
    if (!is_basis_key(k)) throw std::invalid_argument("not a basis monomial");
    if (k.weight() > weight_cap_) throw std::invalid_argument("monomial exceeds weight cap");
    LieElement e;
    e.owner_ = shared_from_this();
    e.terms_[k] = Rat(1);
    return e;
}

LieElement FreeGradedLie::element(const std::map<MonoKey, Rat>& terms) const {
    LieElement e = zero();
    for (const auto& [k, c] : terms) {
        if (is_zero(c)) continue;
        if (!is_basis_key(k)) throw std::invalid_argument("not a basis monomial");
        if (k.weight() > weight_cap_) throw std::invalid_argument("monomial exceeds weight cap");
        e.terms_[k] = c;
    }
    return e;
}

FreeGradedLie::Canon FreeGradedLie::left_bracket(const MonoKey& k, const Canon& e) const {
    Canon acc;
    acc.truncated = e.truncated;
    for (const auto& [m, c] : e.terms) {
        Canon t = mono_bracket_cached(k, m);
        acc.truncated = acc.truncated || t.truncated;
        for (const auto& [km, cm] : t.terms) {
            Rat v = acc.terms[km] + c * cm;
            if (is_zero(v))
                acc.terms.erase(km);
            else
                acc.terms[km] = v;
        }
    }
    return acc;
}

FreeGradedLie::Canon FreeGradedLie::mono_bracket_cached(const MonoKey& a, const MonoKey& b) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto key = std::make_pair(a, b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    if (in_progress_.count(key))
        throw std::logic_error("bracket rewriting cycle on " + show_key(a) + ", " + show_key(b));
    in_progress_.insert(key);
    Canon r;
    try {
        r = mono_bracket(a, b);
    } catch (...) {
        in_progress_.erase(key);
        throw;
    }
    in_progress_.erase(key);
    cache_.emplace(key, r);
    return r;
}

FreeGradedLie::Canon FreeGradedLie::mono_bracket(const MonoKey& a, const MonoKey& b) const {
    Canon r;
    if (a.weight() + b.weight() > weight_cap_) {
        r.truncated = true;
        return r;
    }
    int pa = parity(degree_of(a)), pb = parity(degree_of(b));
    if (a == b) {
        // [m, m] = 0 for even m; the square monomial for odd m.
        if (pa == 1) {
            std::vector<int> ww = a.word;
            ww.insert(ww.end(), a.word.begin(), a.word.end());
            r.terms[MonoKey{ww, true}] = Rat(1);
        }
        return r;
    }
    if (a.sq) {
        auto base = children(a).first;
        if (b == base) return r;  // [[v,v],v] = 0 for odd v
        Canon inner = mono_bracket_cached(base, b);
        r = left_bracket(base, inner);
        for (auto& [k, c] : r.terms) c *= 2;
        return r;
    }
    if (b.sq) {
        auto base = children(b).first;
        if (a == base) return r;  // [v,[v,v]] = 0 for odd v
        Canon t = mono_bracket_cached(b, a);  // squares have even degree, so the swap sign is -1
        r.truncated = t.truncated;
        for (const auto& [k, c] : t.terms) r.terms[k] = -c;
        return r;
    }
    if (word_less(b.word, a.word)) {
        Canon t = mono_bracket_cached(b, a);
        r.truncated = t.truncated;
        Rat s = (pa == 1 && pb == 1) ? Rat(1) : Rat(-1);
        for (const auto& [k, c] : t.terms) r.terms[k] = s * c;
        return r;
    }
    // Now word(a) < word(b), both ordinary Lyndon.
    bool canonical_pair = a.weight() == 1;
    if (!canonical_pair) {
        auto a2 = children(a).second;
        canonical_pair = !word_less(a2.word, b.word);  // a2 >= b
    }
    if (canonical_pair) {
        std::vector<int> w = a.word;
        w.insert(w.end(), b.word.begin(), b.word.end());
        r.terms[MonoKey{w, false}] = Rat(1);
        return r;
    }
    // [[a1,a2],b] = [a1,[a2,b]] - (-1)^{|a1||a2|} [a2,[a1,b]]
    auto [a1, a2] = children(a);
    Canon t1 = left_bracket(a1, mono_bracket_cached(a2, b));
    Canon t2 = left_bracket(a2, mono_bracket_cached(a1, b));
    int p1 = parity(degree_of(a1)), p2 = parity(degree_of(a2));
    Rat s = (p1 == 1 && p2 == 1) ? Rat(-1) : Rat(1);
    r.truncated = t1.truncated || t2.truncated;
    r.terms = std::move(t1.terms);
    for (const auto& [k, c] : t2.terms) {
        Rat v = r.terms[k] - s * c;
        if (is_zero(v))
            r.terms.erase(k);
        else
            r.terms[k] = v;
    }
    return r;
}

LieElement bracket(const LieElement& a, const LieElement& b) {
    if (!compatible_owners(a.owner_, b.owner_)) throw std::invalid_argument("bracket: owner mismatch");
    FreeLiePtr owner = a.owner_ ? a.owner_ : b.owner_;
    LieElement r;
    r.owner_ = owner;
    r.truncated_ = a.truncated_ || b.truncated_;
    if (!owner) return r;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            FreeGradedLie::Canon t = owner->mono_bracket_cached(ka, kb);
            r.truncated_ = r.truncated_ || t.truncated;
            for (const auto& [k, c] : t.terms) {
                Rat v = r.terms_[k] + ca * cb * c;
                if (is_zero(v))
                    r.terms_.erase(k);
                else
                    r.terms_[k] = v;
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Expression parsing

namespace {

struct Lexer {
    std::string src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("parse error at offset " + std::to_string(pos) + ": " + msg);
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    char take() {
        char c = peek();
        if (c) ++pos;
        return c;
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::string ident() {
        skip_ws();
        std::size_t s = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' || src[pos] == '\''))
            ++pos;
        if (s == pos) fail("expected identifier");
        return src.substr(s, pos - s);
    }
    std::string integer() {
        skip_ws();
        std::size_t s = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (s == pos) fail("expected integer");
        return src.substr(s, pos - s);
    }
};

struct ExprParser {
    Lexer lx;
    FreeLiePtr L;

    LieElement parse() {
        LieElement e = expr();
        lx.skip_ws();
        if (lx.pos != lx.src.size()) lx.fail("trailing input");
        return e;
    }

    LieElement expr() {
        Rat sign(1);
        if (lx.eat('-'))
            sign = -1;
        else
            lx.eat('+');
        LieElement acc = term().scaled(sign);
        while (true) {
            char c = lx.peek();
            if (c == '+') {
                lx.take();
                acc = acc + term();
            } else if (c == '-') {
                lx.take();
                acc = acc - term();
            } else {
                break;
            }
        }
        return acc;
    }

    LieElement term() {
        char c = lx.peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rat q = rational();
            if (lx.eat('*')) return factor().scaled(q);
            if (is_zero(q)) return L->zero();
            lx.fail("plain scalar term (only 0 is allowed)");
        }
        return factor();
    }

    Rat rational() {
        std::string num = lx.integer();
        if (lx.eat('/')) {
            std::string den = lx.integer();
            return parse_rat(num + "/" + den);
        }
        return parse_rat(num);
    }

    LieElement factor() {
        char c = lx.peek();
        if (c == '[') {
            lx.take();
            LieElement a = expr();
            if (!lx.eat(',')) lx.fail("expected ',' in bracket");
            LieElement b = expr();
            if (!lx.eat(']')) lx.fail("expected ']'");
            return bracket(a, b);
        }
        if (c == '(') {
            lx.take();
            LieElement e = expr();
            if (!lx.eat(')')) lx.fail("expected ')'");
            return e;
        }
        return L->gen(lx.ident());
    }
};

}  // namespace

LieElement canonical_form(const FreeLiePtr& L, const std::string& expr) {
    if (!L) throw std::invalid_argument("canonical_form: null algebra");
    ExprParser p{Lexer{expr, 0}, L};
    return p.parse();
}

// ---------------------------------------------------------------------------
// Morphisms and derivations

LieMorphism LieMorphism::make(FreeLiePtr source, FreeLiePtr target,
                              std::map<std::string, LieElement> images) {
    if (!source || !target) throw std::invalid_argument("LieMorphism: null algebra");
    LieMorphism f;
    for (const auto& g : source->generators()) {
        auto it = images.find(g.name);
        if (it == images.end()) throw std::invalid_argument("LieMorphism: missing image of " + g.name);
        const LieElement& im = it->second;
        if (!compatible_owners(im.owner(), target)) throw std::invalid_argument("LieMorphism: image owner mismatch");
        auto d = im.degree();
        if (!im.is_zero() && (!d || *d != g.degree))
            throw std::invalid_argument("LieMorphism: image of " + g.name + " is not homogeneous of degree " +
                                        std::to_string(g.degree));
    }
    for (const auto& [name, im] : images) {
        (void)im;
        if (!source->generator_index(name)) throw std::invalid_argument("LieMorphism: unknown generator " + name);
    }
    f.source_ = std::move(source);
    f.target_ = std::move(target);
    f.images_ = std::move(images);
    return f;
}

const LieElement& LieMorphism::image_of(const std::string& gen) const {
    auto it = images_.find(gen);
    if (it == images_.end()) throw std::invalid_argument("LieMorphism: unknown generator " + gen);
    return it->second;
}

LieElement LieMorphism::apply(const LieElement& e) const {
    if (!compatible_owners(e.owner(), source_)) throw std::invalid_argument("LieMorphism: element owner mismatch");
    std::map<MonoKey, LieElement> memo_;
    // Recursive image of a basis key through the factorization tree.
    auto key_image = [&](auto&& self, const MonoKey& k) -> LieElement {
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
        LieElement r;
        if (k.weight() == 1) {
            r = image_of(source_->generators().at(static_cast<std::size_t>(k.word[0])).name);
        } else {
            auto [l, rgt] = source_->children(k);
            r = bracket(self(self, l), self(self, rgt));
        }
        memo_.emplace(k, r);
        return r;
    };
    LieElement acc = target_->zero();
    for (const auto& [k, c] : e.terms()) acc = acc + key_image(key_image, k).scaled(c);
    return acc.marked_truncated(e.truncated());
}

LieDerivation LieDerivation::make(FreeLiePtr L, int degree, std::map<std::string, LieElement> images) {
    if (!L) throw std::invalid_argument("LieDerivation: null algebra");
    LieDerivation d;
    for (const auto& g : L->generators()) {
        auto it = images.find(g.name);
        if (it == images.end()) throw std::invalid_argument("LieDerivation: missing image of " + g.name);
        const LieElement& im = it->second;
        if (!compatible_owners(im.owner(), L)) throw std::invalid_argument("LieDerivation: image owner mismatch");
        auto dd = im.degree();
        if (!im.is_zero() && (!dd || *dd != g.degree + degree))
            throw std::invalid_argument("LieDerivation: image of " + g.name + " has wrong degree");
    }
    for (const auto& [name, im] : images) {
        (void)im;
        if (!L->generator_index(name)) throw std::invalid_argument("LieDerivation: unknown generator " + name);
    }
    d.L_ = std::move(L);
    d.degree_ = degree;
    d.images_ = std::move(images);
    return d;
}

LieElement LieDerivation::apply_key(const MonoKey& k) const {
    LieElement r;
    if (k.weight() == 1) {
        r = images_.at(L_->generators().at(static_cast<std::size_t>(k.word[0])).name);
    } else {
        auto [l, rgt] = L_->children(k);
        int pl = ((L_->degree_of(l) * degree_) % 2 + 2) % 2;
        LieElement left = bracket(apply_key(l), L_->mono(rgt));
        LieElement right = bracket(L_->mono(l), apply_key(rgt));
        r = pl == 1 ? left - right : left + right;
    }
    return r;
}

LieElement LieDerivation::apply(const LieElement& e) const {
    if (!compatible_owners(e.owner(), L_)) throw std::invalid_argument("LieDerivation: element owner mismatch");
    LieElement acc = L_->zero();
    for (const auto& [k, c] : e.terms()) acc = acc + apply_key(k).scaled(c);
    return acc.marked_truncated(e.truncated());
}

// ---------------------------------------------------------------------------
// Constructions

FreeProduct free_product(const std::vector<FreeLiePtr>& factors, const std::vector<std::string>& tags,
                         std::optional<int> weight_cap) {
    if (factors.empty()) throw std::invalid_argument("free_product: no factors");
    if (factors.size() != tags.size()) throw std::invalid_argument("free_product: tags/factors mismatch");
    int cap = weight_cap.value_or(0);
    if (!weight_cap)
        for (const auto& f : factors) cap = std::max(cap, f->weight_cap());
    std::vector<LieGenerator> gens;
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (const auto& g : factors[i]->generators())
            gens.push_back({g.name + tags[i], g.degree});
    FreeProduct fp;
    fp.algebra = FreeGradedLie::make(gens, cap);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::map<std::string, LieElement> images;
        for (const auto& g : factors[i]->generators()) images[g.name] = fp.algebra->gen(g.name + tags[i]);
        fp.inclusions.push_back(LieMorphism::make(factors[i], fp.algebra, std::move(images)));
    }
    return fp;
}

FreeLiePtr lcs_quotient(const FreeLiePtr& L, int nil_class) {
    if (!L) throw std::invalid_argument("lcs_quotient: null algebra");
    if (nil_class < 1) throw std::invalid_argument("lcs_quotient: class must be >= 1");
    return FreeGradedLie::make(L->generators(), std::min(L->weight_cap(), nil_class));
}

LieElement truncate_to(const FreeLiePtr& target, const LieElement& e) {
    if (!target) throw std::invalid_argument("truncate_to: null algebra");
    if (e.owner() && e.owner()->generators() != target->generators())
        throw std::invalid_argument("truncate_to: generator mismatch");
    std::map<MonoKey, Rat> kept;
    bool dropped = false;
    for (const auto& [k, c] : e.terms()) {
        if (k.weight() <= target->weight_cap())
            kept[k] = c;
        else
            dropped = true;
    }
    return target->element(kept).marked_truncated(e.truncated() || dropped);
}

}  // namespace kappa
