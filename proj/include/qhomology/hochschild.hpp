#pragma once

// Cochain-level verification machinery over the operator algebra of the
// zero-mode model: the matrix algebra generated by the coproduct action and
// the step bilinears, state-space-valued cochains on it, the q^2-twisted
// coboundary with its coface decomposition, the compatible extension of the
// lowering bilinear, and the degree-zero part of the total differential's
// homology computed along two independent routes.
//
// Everything here is exact linear algebra. Statements about the full cochain
// complex are certified by two-sided "pinch" arguments: a computed kernel of
// finitely many explicit constraints is an upper bound for the true kernel,
// a structurally verified subspace is a lower bound, and equality of the two
// pins the answer without sampling.

#include "qhomology/ndiff.hpp"
#include "qhomology/report.hpp"
#include "qhomology/wznw.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace qh {

// ---------------------------------------------------------------------------
// The operator algebra acting on the state space, presented by the matrices
// it is generated by and carried as an echelonized basis of flattened
// matrices. Every element is charge-homogeneous (it shifts the pair
// (p - pbar, w + wbar) by a constant), which makes leading-entry elimination
// globally consistent: a given matrix position can only ever be occupied by
// elements of a single shift class.
// ---------------------------------------------------------------------------

class ImageAlgebra {
  public:
    struct Element {
        ExactMatrix matrix;
        std::array<int, 2> shift; // (d2, d3) charge shift common to all entries
        std::vector<std::pair<long long, Scalar>> flat; // sorted, leading coeff one
    };

    const ZeroModeModel* model = nullptr;
    std::vector<Element> basis;
    std::vector<std::string> generator_names;
    std::vector<ExactMatrix> generator_matrices;
    std::vector<int> generator_index; // basis index, -1 when linearly dependent
    int unit_index = -1;

    const FieldContext& ctx() const { return model->ctx(); }
    int dim() const { return static_cast<int>(basis.size()); }
    int space_dim() const { return model->dimH(); }
    const ExactMatrix& matrix_of(int i) const { return basis[static_cast<size_t>(i)].matrix; }
    const Scalar& counit_of(int i) const { return counit_[static_cast<size_t>(i)]; }
    bool full_table() const { return full_table_; }

    std::array<int, 2> shift_of_position(long long pos) const {
        const int n = space_dim();
        int r = static_cast<int>(pos / n), c = static_cast<int>(pos % n);
        return {d2_[static_cast<size_t>(r)] - d2_[static_cast<size_t>(c)],
                d3_[static_cast<size_t>(r)] - d3_[static_cast<size_t>(c)]};
    }

    // Coordinates of an arbitrary matrix in the echelon basis; empty when the
    // matrix lies outside the algebra's span.
    std::optional<std::vector<std::pair<int, Scalar>>> coordinates(const ExactMatrix& m) const {
        std::map<long long, Scalar> work = flatten(m);
        std::vector<std::pair<int, Scalar>> out;
        while (!work.empty()) {
            auto lead = work.begin();
            auto lit = leaders_.find(lead->first);
            if (lit == leaders_.end()) return std::nullopt;
            int bidx = lit->second;
            Scalar c = lead->second; // basis leading coefficients are one
            subtract_scaled(work, basis[static_cast<size_t>(bidx)].flat, c);
            out.emplace_back(bidx, std::move(c));
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    // Structure constants of a product of basis elements, memoized. The
    // algebra is multiplicatively closed by construction of the basis, so a
    // product escaping the span is a hard error.
    const std::vector<std::pair<int, Scalar>>& product(int i, int j) const {
        auto key = std::make_pair(i, j);
        auto it = product_memo_.find(key);
        if (it != product_memo_.end()) return it->second;
        ExactMatrix m = basis[static_cast<size_t>(i)].matrix * basis[static_cast<size_t>(j)].matrix;
        auto coords = coordinates(m);
        if (!coords) throw std::logic_error("basis product escapes the algebra span");
        return product_memo_.emplace(key, std::move(*coords)).first->second;
    }

    void materialize_full_table() {
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) {
                const auto& pc = product(i, j);
                for (const auto& [m, c] : pc)
                    reverse_products_[m].emplace_back(i, j, c);
            }
        full_table_ = true;
    }

    // All (a, b, c) with the given basis element appearing in a*b with
    // coefficient c. Requires the materialized table.
    const std::vector<std::tuple<int, int, Scalar>>& factorizations(int m) const {
        if (!full_table_)
            throw std::logic_error("factorization lookup requires the full product table");
        static const std::vector<std::tuple<int, int, Scalar>> empty;
        auto it = reverse_products_.find(m);
        return it == reverse_products_.end() ? empty : it->second;
    }

    friend ImageAlgebra build_image_algebra(const ZeroModeModel& mm);

  private:
    std::vector<int> d2_, d3_;
    std::vector<Scalar> counit_;
    std::map<long long, int> leaders_; // leading flat position -> basis index
    mutable std::map<std::pair<int, int>, std::vector<std::pair<int, Scalar>>> product_memo_;
    std::map<int, std::vector<std::tuple<int, int, Scalar>>> reverse_products_;
    bool full_table_ = false;

    std::map<long long, Scalar> flatten(const ExactMatrix& m) const {
        std::map<long long, Scalar> out;
        const long long n = space_dim();
        for (int r = 0; r < m.rows(); ++r)
            for (const auto& [c, v] : m.row(r)) out.emplace(r * n + c, v);
        return out;
    }

    static void subtract_scaled(std::map<long long, Scalar>& work,
                                const std::vector<std::pair<long long, Scalar>>& flat,
                                const Scalar& c) {
        for (const auto& [pos, val] : flat) {
            auto it = work.find(pos);
            if (it == work.end()) {
                Scalar nv = -(c * val);
                if (!nv.is_zero()) work.emplace(pos, std::move(nv));
            } else {
                it->second -= c * val;
                if (it->second.is_zero()) work.erase(it);
            }
        }
    }

    // Insert a matrix into the echelon basis; returns its index or -1 when it
    // is linearly dependent on the current basis.
    int insert(const ExactMatrix& m) {
        std::map<long long, Scalar> work = flatten(m);
        if (work.empty()) return -1;
        std::array<int, 2> shift = shift_of_position(work.begin()->first);
        for (const auto& [pos, v] : work)
            if (shift_of_position(pos) != shift)
                throw std::logic_error("algebra element is not charge-homogeneous");
        while (!work.empty()) {
            auto lead = work.begin();
            auto lit = leaders_.find(lead->first);
            if (lit == leaders_.end()) break;
            Scalar c = lead->second;
            subtract_scaled(work, basis[static_cast<size_t>(lit->second)].flat, c);
        }
        if (work.empty()) return -1;
        Scalar inv = work.begin()->second.inverse();
        Element el;
        el.shift = shift;
        const long long n = space_dim();
        el.matrix = ExactMatrix(ctx(), space_dim(), space_dim());
        for (const auto& [pos, v] : work) {
            Scalar nv = v * inv;
            el.matrix.set(static_cast<int>(pos / n), static_cast<int>(pos % n), nv);
            el.flat.emplace_back(pos, std::move(nv));
        }
        leaders_[el.flat.front().first] = dim();
        basis.push_back(std::move(el));
        return dim() - 1;
    }

    // The counit is read off the action on the vacuum line: every element
    // must send the vacuum to a multiple of itself (a hard structural
    // requirement; anything else invalidates the coboundary formula).
    void read_counit() {
        counit_.clear();
        for (int i = 0; i < dim(); ++i) {
            const ExactMatrix& m = matrix_of(i);
            for (int r = 1; r < m.rows(); ++r)
                if (!m.get(r, 0).is_zero())
                    throw std::logic_error("algebra does not act on the vacuum line by a scalar");
            counit_.push_back(m.get(0, 0));
        }
    }
};

inline ImageAlgebra build_image_algebra(const ZeroModeModel& mm) {
    ImageAlgebra alg;
    alg.model = &mm;
    for (int i = 0; i < mm.dimH(); ++i) {
        std::array<int, 3> ch = mm.charges_of_h(i);
        alg.d2_.push_back(ch[1]);
        alg.d3_.push_back(ch[2]);
    }
    const FieldContext& ctx = mm.ctx();
    ExactMatrix dkhalf_inv =
        mm.diag_on_h([&](int i) { return ctx.zeta_pow(-mm.charges_of_h(i)[2]); });
    alg.generator_names = {"unit", "dE", "dF", "dKhalf", "dKhalf_inv",
                           "B",    "Bprime", "q_pm", "q_pm_inv"};
    alg.generator_matrices = {ExactMatrix::identity(ctx, mm.dimH()),
                              mm.dE,
                              mm.dF,
                              mm.dKhalf,
                              dkhalf_inv,
                              mm.B,
                              mm.Bprime,
                              mm.qpm,
                              mm.qpminv};
    for (const ExactMatrix& g : alg.generator_matrices) alg.generator_index.push_back(alg.insert(g));
    alg.unit_index = alg.generator_index.front();
    if (alg.unit_index != 0) throw std::logic_error("unit did not land at basis index zero");

    // Saturate: left-multiply every basis element by every generator until
    // nothing new appears. Breadth-first insertion keeps the basis order
    // deterministic.
    for (size_t pos = 0; pos < alg.basis.size(); ++pos)
        for (size_t g = 1; g < alg.generator_matrices.size(); ++g)
            alg.insert(alg.generator_matrices[g] * alg.basis[pos].matrix);

    alg.read_counit();
    return alg;
}

// ---------------------------------------------------------------------------
// Cochains: finitely supported maps from tuples of algebra basis indices to
// state-space vectors. Degree zero is a single value at the empty tuple.
// ---------------------------------------------------------------------------

struct Cochain {
    int degree = 0;
    std::map<std::vector<int>, Vec> coeffs;
};

inline Cochain state_cochain(const Vec& v) {
    Cochain w;
    w.degree = 0;
    if (!is_zero_vec(v)) w.coeffs.emplace(std::vector<int>{}, v);
    return w;
}

inline const Vec* value_at(const Cochain& w, const std::vector<int>& key) {
    auto it = w.coeffs.find(key);
    return it == w.coeffs.end() ? nullptr : &it->second;
}

inline bool cochain_is_zero(const Cochain& w) {
    for (const auto& [k, v] : w.coeffs)
        if (!is_zero_vec(v)) return false;
    return true;
}

inline bool cochain_equal(const Cochain& a, const Cochain& b) {
    if (a.degree != b.degree) return false;
    std::set<std::vector<int>> keys;
    for (const auto& [k, v] : a.coeffs) keys.insert(k);
    for (const auto& [k, v] : b.coeffs) keys.insert(k);
    for (const auto& k : keys) {
        const Vec* va = value_at(a, k);
        const Vec* vb = value_at(b, k);
        if (va && vb) {
            if (!is_zero_vec(sub_vec(*va, *vb))) return false;
        } else if (va ? !is_zero_vec(*va) : (vb && !is_zero_vec(*vb))) {
            return false;
        }
    }
    return true;
}

namespace detail {

inline void cochain_accumulate(Cochain& out, const std::vector<int>& key, const Vec& v,
                               const Scalar& c) {
    auto it = out.coeffs.find(key);
    if (it == out.coeffs.end()) {
        Vec scaled = v;
        for (auto& x : scaled)
            if (!x.is_zero()) x = x * c;
        out.coeffs.emplace(key, std::move(scaled));
    } else {
        for (size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) it->second[i] += c * v[i];
    }
}

inline void cochain_prune(Cochain& w) {
    for (auto it = w.coeffs.begin(); it != w.coeffs.end();)
        it = is_zero_vec(it->second) ? w.coeffs.erase(it) : std::next(it);
}

inline std::string tuple_string(const std::vector<int>& t) {
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(t[i]);
    }
    return s + ")";
}

} // namespace detail

// The compatible same-degree extension of the lowering bilinear: on degree n
// it acts by q^{2n} A on every value.
inline Cochain cochain_extension(const ZeroModeModel& mm, const Cochain& w) {
    Cochain out;
    out.degree = w.degree;
    Scalar wgt = mm.ctx().q_pow(2LL * w.degree);
    for (const auto& [key, val] : w.coeffs) {
        Vec img = mm.A.apply(val);
        for (auto& x : img)
            if (!x.is_zero()) x = x * wgt;
        if (!is_zero_vec(img)) out.coeffs.emplace(key, std::move(img));
    }
    return out;
}

// Materialized coface operators f_0 .. f_{n+1} on a degree-n cochain:
// f_0 acts by the leading argument, f_k (1 <= k <= n) merges two adjacent
// arguments (which needs the reverse product table), f_{n+1} pairs the
// trailing argument with the counit.
inline Cochain coface(const ImageAlgebra& alg, int alpha, const Cochain& w) {
    const int n = w.degree;
    if (alpha < 0 || alpha > n + 1) throw std::invalid_argument("coface index out of range");
    if (alpha >= 1 && alpha <= n && !alg.full_table())
        throw std::logic_error("materializing an inner coface requires the full product table");
    Cochain out;
    out.degree = n + 1;
    const Scalar one = alg.ctx().one();
    for (const auto& [key, val] : w.coeffs) {
        if (alpha == 0) {
            for (int t = 0; t < alg.dim(); ++t) {
                Vec img = alg.matrix_of(t).apply(val);
                if (is_zero_vec(img)) continue;
                std::vector<int> nk;
                nk.reserve(key.size() + 1);
                nk.push_back(t);
                nk.insert(nk.end(), key.begin(), key.end());
                detail::cochain_accumulate(out, nk, img, one);
            }
        } else if (alpha <= n) {
            int m = key[static_cast<size_t>(alpha - 1)];
            for (const auto& [a, b, c] : alg.factorizations(m)) {
                std::vector<int> nk;
                nk.reserve(key.size() + 1);
                nk.insert(nk.end(), key.begin(), key.begin() + (alpha - 1));
                nk.push_back(a);
                nk.push_back(b);
                nk.insert(nk.end(), key.begin() + alpha, key.end());
                detail::cochain_accumulate(out, nk, val, c);
            }
        } else {
            for (int t = 0; t < alg.dim(); ++t) {
                const Scalar& eps = alg.counit_of(t);
                if (eps.is_zero()) continue;
                std::vector<int> nk = key;
                nk.push_back(t);
                detail::cochain_accumulate(out, nk, val, eps);
            }
        }
    }
    detail::cochain_prune(out);
    return out;
}

// Materialized coboundary: the alternating-type q^2-weighted sum of cofaces,
//   (d w)(X_0..X_n) = X_0 w(X_1..X_n)
//                   + sum_{k=1}^{n} q^{2k} w(.., X_{k-1} X_k, ..)
//                   - q^{2n} w(X_0..X_{n-1}) eps(X_n).
// Degree-0 input works at any height; positive degree needs the full table.
inline Cochain coboundary(const ImageAlgebra& alg, const Cochain& w) {
    const int n = w.degree;
    if (n > 0 && !alg.full_table())
        throw std::logic_error("materializing the coboundary above degree zero requires the full product table");
    const FieldContext& ctx = alg.ctx();
    Cochain out = coface(alg, 0, w);
    out.degree = n + 1;
    for (int k = 1; k <= n; ++k) {
        Cochain fk = coface(alg, k, w);
        Scalar wk = ctx.q_pow(2LL * k);
        for (const auto& [key, val] : fk.coeffs) detail::cochain_accumulate(out, key, val, wk);
    }
    Cochain last = coface(alg, n + 1, w);
    Scalar wl = -ctx.q_pow(2LL * n);
    for (const auto& [key, val] : last.coeffs) detail::cochain_accumulate(out, key, val, wl);
    detail::cochain_prune(out);
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise evaluation. Values of operator words applied to a cochain are
// computed at explicit argument tuples, expanding merged arguments through
// the structure constants and skipping branches that cannot reach the
// cochain's support. This works at any height and any degree; nothing is
// materialized.
// ---------------------------------------------------------------------------

inline std::optional<Vec> eval_coface_at(const ImageAlgebra& alg, int alpha, const Cochain& w,
                                         const std::vector<int>& T) {
    const int n = w.degree;
    if (static_cast<int>(T.size()) != n + 1)
        throw std::invalid_argument("coface evaluation tuple has the wrong length");
    if (alpha < 0 || alpha > n + 1) throw std::invalid_argument("coface index out of range");
    if (alpha == 0) {
        const Vec* v = value_at(w, std::vector<int>(T.begin() + 1, T.end()));
        if (!v) return std::nullopt;
        Vec img = alg.matrix_of(T.front()).apply(*v);
        if (is_zero_vec(img)) return std::nullopt;
        return img;
    }
    if (alpha <= n) {
        std::optional<Vec> acc;
        std::vector<int> sub;
        sub.reserve(T.size() - 1);
        sub.insert(sub.end(), T.begin(), T.begin() + (alpha - 1));
        sub.push_back(0);
        sub.insert(sub.end(), T.begin() + alpha + 1, T.end());
        for (const auto& [m, c] : alg.product(T[static_cast<size_t>(alpha - 1)],
                                              T[static_cast<size_t>(alpha)])) {
            sub[static_cast<size_t>(alpha - 1)] = m;
            const Vec* v = value_at(w, sub);
            if (!v) continue;
            if (!acc) acc.emplace(zero_vec(alg.ctx(), alg.space_dim()));
            for (size_t i = 0; i < v->size(); ++i)
                if (!(*v)[i].is_zero()) (*acc)[i] += c * (*v)[i];
        }
        if (acc && is_zero_vec(*acc)) return std::nullopt;
        return acc;
    }
    const Scalar& eps = alg.counit_of(T.back());
    if (eps.is_zero()) return std::nullopt;
    const Vec* v = value_at(w, std::vector<int>(T.begin(), T.end() - 1));
    if (!v) return std::nullopt;
    Vec img = *v;
    for (auto& x : img)
        if (!x.is_zero()) x = x * eps;
    if (is_zero_vec(img)) return std::nullopt;
    return img;
}

// Evaluates a word in {'d' = coboundary, 'a' = extension} applied to a fixed
// cochain, at a tuple whose length matches degree + (number of 'd's). The
// leading character acts last. Results are memoized per (word, tuple).
class WordEvaluator {
  public:
    WordEvaluator(const ImageAlgebra& alg, const ZeroModeModel& mm, const Cochain& w)
        : alg_(alg), mm_(mm), w_(w) {}

    std::optional<Vec> eval(const std::string& word, const std::vector<int>& T) {
        if (word.empty()) {
            if (static_cast<int>(T.size()) != w_.degree)
                throw std::logic_error("evaluation tuple length does not match the degree");
            const Vec* v = value_at(w_, T);
            if (!v || is_zero_vec(*v)) return std::nullopt;
            return *v;
        }
        auto memo_key = std::make_pair(word, T);
        auto mit = memo_.find(memo_key);
        if (mit != memo_.end()) return mit->second;

        const FieldContext& ctx = alg_.ctx();
        std::string rest = word.substr(1);
        std::optional<Vec> out;
        if (word.front() == 'a') {
            auto inner = eval(rest, T);
            if (inner) {
                Vec img = mm_.A.apply(*inner);
                Scalar wgt = ctx.q_pow(2LL * static_cast<long long>(T.size()));
                for (auto& x : img)
                    if (!x.is_zero()) x = x * wgt;
                if (!is_zero_vec(img)) out = std::move(img);
            }
        } else if (word.front() == 'd') {
            if (T.empty()) throw std::logic_error("coboundary evaluation needs a nonempty tuple");
            const int L = static_cast<int>(T.size());
            std::optional<Vec> acc;
            auto add = [&](const Vec& v, const Scalar& c) {
                if (!acc) acc.emplace(zero_vec(ctx, alg_.space_dim()));
                for (size_t i = 0; i < v.size(); ++i)
                    if (!v[i].is_zero()) (*acc)[i] += c * v[i];
            };
            {
                auto inner = eval(rest, std::vector<int>(T.begin() + 1, T.end()));
                if (inner) {
                    Vec img = alg_.matrix_of(T.front()).apply(*inner);
                    if (!is_zero_vec(img)) add(img, ctx.one());
                }
            }
            for (int k = 1; k <= L - 1; ++k) {
                const auto& pc = alg_.product(T[static_cast<size_t>(k - 1)],
                                              T[static_cast<size_t>(k)]);
                if (pc.empty()) continue;
                std::vector<int> sub;
                sub.reserve(T.size() - 1);
                sub.insert(sub.end(), T.begin(), T.begin() + (k - 1));
                sub.push_back(0);
                sub.insert(sub.end(), T.begin() + k + 1, T.end());
                Scalar wk = ctx.q_pow(2LL * k);
                for (const auto& [m, c] : pc) {
                    sub[static_cast<size_t>(k - 1)] = m;
                    auto inner = eval(rest, sub);
                    if (inner) add(*inner, wk * c);
                }
            }
            {
                const Scalar& eps = alg_.counit_of(T.back());
                if (!eps.is_zero()) {
                    auto inner = eval(rest, std::vector<int>(T.begin(), T.end() - 1));
                    if (inner) add(*inner, -(ctx.q_pow(2LL * (L - 1)) * eps));
                }
            }
            if (acc && !is_zero_vec(*acc)) out = std::move(acc);
        } else {
            throw std::invalid_argument("unknown operator letter in word");
        }
        return memo_.emplace(std::move(memo_key), std::move(out)).first->second;
    }

    // The component of (d + a)^power landing at tuples of the given length:
    // the sum over all words with exactly |T| - degree coboundary letters.
    std::optional<Vec> total_power_component(int power, const std::vector<int>& T) {
        const int d_count = static_cast<int>(T.size()) - w_.degree;
        if (d_count < 0 || d_count > power) return std::nullopt;
        std::optional<Vec> acc;
        for (uint32_t mask = 0; mask < (1u << power); ++mask) {
            if (__builtin_popcount(mask) != d_count) continue;
            std::string word;
            for (int b = power - 1; b >= 0; --b) word += ((mask >> b) & 1u) ? 'd' : 'a';
            auto v = eval(word, T);
            if (!v) continue;
            if (!acc) acc.emplace(zero_vec(alg_.ctx(), alg_.space_dim()));
            for (size_t i = 0; i < v->size(); ++i)
                if (!(*v)[i].is_zero()) (*acc)[i] += (*v)[i];
        }
        if (acc && is_zero_vec(*acc)) return std::nullopt;
        return acc;
    }

  private:
    const ImageAlgebra& alg_;
    const ZeroModeModel& mm_;
    const Cochain& w_;
    std::map<std::pair<std::string, std::vector<int>>, std::optional<Vec>> memo_;
};

namespace detail {

// a - c * b with empty optionals treated as zero.
inline bool maybe_equal(const FieldContext& ctx, int dim, const std::optional<Vec>& a,
                        const std::optional<Vec>& b, const Scalar& c) {
    Vec x = a ? *a : zero_vec(ctx, dim);
    if (b)
        for (size_t i = 0; i < x.size(); ++i)
            if (!(*b)[i].is_zero()) x[i] -= c * (*b)[i];
    return is_zero_vec(x);
}

// Argument tuples of the requested length that actually exercise the support
// of a cochain: support keys padded by leading arguments, unit-element
// expansions of a slot (whose merge is a single term), counit-supported
// trailing arguments, and a sprinkle of fully random tuples.
inline std::vector<std::vector<int>> sample_tuples(const ImageAlgebra& alg, const Cochain& w,
                                                   int len, std::mt19937_64& rng, int budget) {
    std::vector<std::vector<int>> keys;
    for (const auto& [k, v] : w.coeffs) keys.push_back(k);
    if (keys.empty()) keys.emplace_back(static_cast<size_t>(w.degree), 0);
    std::vector<int> eps_support;
    for (int i = 0; i < alg.dim(); ++i)
        if (!alg.counit_of(i).is_zero()) eps_support.push_back(i);

    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> out;
    auto push = [&](std::vector<int> t) {
        if (static_cast<int>(t.size()) != len) return;
        if (seen.insert(t).second) out.push_back(std::move(t));
    };
    auto rnd_index = [&]() { return static_cast<int>(rng() % static_cast<uint64_t>(alg.dim())); };

    for (int attempt = 0; attempt < 20 * budget && static_cast<int>(out.size()) < budget;
         ++attempt) {
        std::vector<int> t = keys[rng() % keys.size()];
        while (static_cast<int>(t.size()) < len) {
            switch (rng() % 4) {
                case 0: t.insert(t.begin(), rnd_index()); break;
                case 1: t.insert(t.begin() + static_cast<long>(rng() % (t.size() + 1)),
                                 alg.unit_index);
                    break;
                case 2: t.push_back(eps_support[rng() % eps_support.size()]); break;
                default: t.insert(t.begin() + static_cast<long>(rng() % (t.size() + 1)),
                                  rnd_index());
                    break;
            }
        }
        push(std::move(t));
        if (static_cast<int>(out.size()) + 1 == budget) {
            std::vector<int> r(static_cast<size_t>(len));
            for (auto& x : r) x = rnd_index();
            push(std::move(r));
        }
    }
    return out;
}

} // namespace detail

// Seeded random sparse cochain with palette-valued entries.
inline Cochain random_cochain(const ImageAlgebra& alg, std::mt19937_64& rng, int degree,
                              int max_keys = 4, int max_entries = 3) {
    const FieldContext& ctx = alg.ctx();
    Cochain w;
    w.degree = degree;
    int keys = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_keys));
    for (int ki = 0; ki < keys; ++ki) {
        std::vector<int> key(static_cast<size_t>(degree));
        for (auto& x : key) x = static_cast<int>(rng() % static_cast<uint64_t>(alg.dim()));
        Vec v = zero_vec(ctx, alg.space_dim());
        int entries = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_entries));
        for (int e = 0; e < entries; ++e)
            v[rng() % v.size()] = random_palette_scalar(ctx, rng, /*allow_zero=*/false);
        auto it = w.coeffs.find(key);
        if (it == w.coeffs.end())
            w.coeffs.emplace(std::move(key), std::move(v));
        else
            it->second = add_vec(it->second, v);
    }
    detail::cochain_prune(w);
    return w;
}

// ---------------------------------------------------------------------------
// Verification suites.
// ---------------------------------------------------------------------------

// Structural facts about the operator algebra itself: unit placement, counit
// as a character, the scalar action on the invariant subspace, and the
// lowering bilinear commuting with everything in sight.
inline CheckReport verify_image_algebra(const ZeroModeModel& mm, const ImageAlgebra& alg) {
    const FieldContext& ctx = mm.ctx();
    CheckReport rep;
    rep.suite = "hochschild.algebra";
    rep.h = mm.h;

    rep.add("algebra.dim=" + std::to_string(alg.dim()), alg.dim() > 0);
    rep.add("algebra.unit_first",
            alg.unit_index == 0 &&
                (alg.matrix_of(0) - ExactMatrix::identity(ctx, mm.dimH())).is_zero());

    bool members = true;
    for (const ExactMatrix& g : alg.generator_matrices)
        if (!alg.coordinates(g)) members = false;
    rep.add("algebra.generators_in_span", members);

    // Counit values on the generators: 1 on the unit and the diagonal
    // generators, 0 on the raising/lowering-type ones.
    {
        auto eps_of_matrix = [&](const ExactMatrix& g) { return g.get(0, 0); };
        bool ok = true;
        for (size_t gi = 0; gi < alg.generator_names.size(); ++gi) {
            const std::string& name = alg.generator_names[gi];
            Scalar eps = eps_of_matrix(alg.generator_matrices[gi]);
            bool diagonal_type = name == "unit" || name == "dKhalf" || name == "dKhalf_inv" ||
                                 name == "q_pm" || name == "q_pm_inv";
            if (diagonal_type ? !(eps - ctx.one()).is_zero() : !eps.is_zero()) ok = false;
        }
        rep.add("algebra.counit_on_generators", ok);
    }

    // The counit is an algebra character. The vacuum-line action makes this
    // automatic once every element acts on the line by its counit value, and
    // it is re-verified here through the structure constants: on all pairs
    // when the full table is materialized, on generator-by-basis pairs
    // otherwise (which generates multiplicativity on the whole algebra).
    {
        bool ok = true;
        auto check_pair = [&](int i, int j) {
            Scalar lhs = ctx.zero();
            for (const auto& [m, c] : alg.product(i, j)) lhs += c * alg.counit_of(m);
            if (!(lhs - alg.counit_of(i) * alg.counit_of(j)).is_zero()) ok = false;
        };
        if (alg.full_table()) {
            for (int i = 0; i < alg.dim(); ++i)
                for (int j = 0; j < alg.dim(); ++j) check_pair(i, j);
        } else {
            for (int gi : alg.generator_index) {
                if (gi < 0) continue;
                for (int j = 0; j < alg.dim(); ++j) check_pair(gi, j);
            }
        }
        rep.add("algebra.counit_character", ok);
    }

    // Every element acts on the invariant subspace by its counit value.
    {
        bool ok = true;
        for (int r = 0; r < mm.H_I.basis().rows() && ok; ++r) {
            Vec v = dense_row(mm.H_I.basis(), r);
            for (int i = 0; i < alg.dim(); ++i) {
                Vec img = alg.matrix_of(i).apply(v);
                Vec expect = v;
                for (auto& x : expect) x = x * alg.counit_of(i);
                if (!is_zero_vec(sub_vec(img, expect))) {
                    ok = false;
                    break;
                }
            }
        }
        rep.add("algebra.counit_action_on_invariants", ok);
    }

    // The lowering bilinear commutes with the whole algebra; this is what
    // makes its cochain extension compatible with the coboundary.
    {
        bool ok = true;
        for (int i = 0; i < alg.dim() && ok; ++i)
            if (!mm.A.commutator(alg.matrix_of(i)).is_zero()) ok = false;
        rep.add("algebra.lowering_commutes", ok);
    }
    return rep;
}

// The identity battery on seeded random sparse cochains, checked by exact
// pointwise evaluation at tuples that exercise the support: the coboundary
// is h-nilpotent, the extension q^2-commutes with it (coface by coface and
// in total), the coface decomposition reproduces the coboundary, and the
// binomial-free collapse (d + a)^h = 0 holds componentwise.
inline CheckReport verify_cochain_identities(const ZeroModeModel& mm, const ImageAlgebra& alg,
                                             uint64_t seed, int trials = 100) {
    const FieldContext& ctx = mm.ctx();
    const int h = mm.h;
    CheckReport rep;
    rep.suite = "hochschild.identities";
    rep.h = h;
    rep.seed = seed;
    std::mt19937_64 rng(seed);

    std::vector<int> degrees = (h == 2) ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 1};
    const Scalar q2 = ctx.q_pow(2);

    int fail_dh = 0, fail_comm = 0, fail_coface_comm = 0, fail_total = 0, fail_decomp = 0,
        fail_ah = 0, fail_materialized = 0;
    long long exercised = 0;
    std::string first_witness;
    auto note = [&](int& counter, const std::vector<int>& T, const char* what) {
        if (counter == 0 && first_witness.empty())
            first_witness = std::string(what) + " at " + detail::tuple_string(T);
        ++counter;
    };

    for (int t = 0; t < trials; ++t) {
        int deg = degrees[static_cast<size_t>(t) % degrees.size()];
        Cochain w = random_cochain(alg, rng, deg, deg == 0 ? 1 : 3, 3);
        if (w.coeffs.empty()) continue;
        WordEvaluator ev(alg, mm, w);
        Cochain aw = cochain_extension(mm, w);

        // d^h = 0
        for (const auto& T : detail::sample_tuples(alg, w, deg + h, rng, 3))
            if (ev.eval(std::string(static_cast<size_t>(h), 'd'), T)) note(fail_dh, T, "d^h");

        // a d = q^2 d a
        for (const auto& T : detail::sample_tuples(alg, w, deg + 1, rng, 3)) {
            auto lhs = ev.eval("ad", T);
            auto rhs = ev.eval("da", T);
            if (lhs) ++exercised;
            if (!detail::maybe_equal(ctx, mm.dimH(), lhs, rhs, q2)) note(fail_comm, T, "ad-q2da");
        }

        // a f_alpha = q^2 f_alpha a, coface by coface
        for (int alpha = 0; alpha <= deg + 1; ++alpha)
            for (const auto& T : detail::sample_tuples(alg, w, deg + 1, rng, 2)) {
                auto fv = eval_coface_at(alg, alpha, w, T);
                std::optional<Vec> lhs;
                if (fv) {
                    Vec img = mm.A.apply(*fv);
                    Scalar wgt = ctx.q_pow(2LL * (deg + 1));
                    for (auto& x : img)
                        if (!x.is_zero()) x = x * wgt;
                    if (!is_zero_vec(img)) lhs = std::move(img);
                }
                auto rhs = eval_coface_at(alg, alpha, aw, T);
                if (lhs) ++exercised;
                if (!detail::maybe_equal(ctx, mm.dimH(), lhs, rhs, q2))
                    note(fail_coface_comm, T, "af-q2fa");
            }

        // (d + a)^h = 0, every degree component
        for (int len = deg; len <= deg + h; ++len)
            for (const auto& T : detail::sample_tuples(alg, w, len, rng, 2))
                if (ev.total_power_component(h, T)) note(fail_total, T, "(d+a)^h");

        // coboundary = coface decomposition
        for (const auto& T : detail::sample_tuples(alg, w, deg + 1, rng, 3)) {
            auto dv = ev.eval("d", T);
            std::optional<Vec> rhs;
            auto add = [&](const std::optional<Vec>& v, const Scalar& c) {
                if (!v) return;
                if (!rhs) rhs.emplace(zero_vec(ctx, mm.dimH()));
                for (size_t i = 0; i < v->size(); ++i)
                    if (!(*v)[i].is_zero()) (*rhs)[i] += c * (*v)[i];
            };
            for (int alpha = 0; alpha <= deg; ++alpha)
                add(eval_coface_at(alg, alpha, w, T), ctx.q_pow(2LL * alpha));
            add(eval_coface_at(alg, deg + 1, w, T), -ctx.q_pow(2LL * deg));
            if (dv) ++exercised;
            if (!detail::maybe_equal(ctx, mm.dimH(), dv, rhs, ctx.one()))
                note(fail_decomp, T, "decomposition");
        }

        // a^h = 0
        for (const auto& T : detail::sample_tuples(alg, w, deg, rng, 2))
            if (ev.eval(std::string(static_cast<size_t>(h), 'a'), T)) note(fail_ah, T, "a^h");

        // Materialized cross-checks when the full table is available: the
        // materialized coboundary agrees with pointwise evaluation, squares
        // to zero, and matches its coface decomposition.
        if (alg.full_table()) {
            Cochain dw = coboundary(alg, w);
            for (const auto& [key, val] : dw.coeffs) {
                auto pv = ev.eval("d", key);
                if (!detail::maybe_equal(ctx, mm.dimH(), pv, std::optional<Vec>(val), ctx.one()))
                    note(fail_materialized, key, "materialized-vs-pointwise");
            }
            if (!cochain_is_zero(coboundary(alg, dw)))
                note(fail_materialized, {}, "materialized d^2");
            Cochain combo = coface(alg, 0, w);
            for (int k = 1; k <= deg; ++k) {
                Cochain fk = coface(alg, k, w);
                for (const auto& [key, val] : fk.coeffs)
                    detail::cochain_accumulate(combo, key, val, ctx.q_pow(2LL * k));
            }
            Cochain flast = coface(alg, deg + 1, w);
            for (const auto& [key, val] : flast.coeffs)
                detail::cochain_accumulate(combo, key, val, -ctx.q_pow(2LL * deg));
            detail::cochain_prune(combo);
            if (!cochain_equal(dw, combo)) note(fail_materialized, {}, "materialized decomposition");
        }
    }

    // Degree-zero materialization never touches the product table, so the
    // materialized coboundary of every state basis vector is compared against
    // pointwise evaluation exhaustively, at any height.
    int fail_degree0 = 0;
    for (int i = 0; i < mm.dimH(); ++i) {
        Vec e = zero_vec(ctx, mm.dimH());
        e[static_cast<size_t>(i)] = ctx.one();
        Cochain wi = state_cochain(e);
        WordEvaluator ev(alg, mm, wi);
        Cochain dwi = coboundary(alg, wi);
        for (int t = 0; t < alg.dim(); ++t) {
            std::vector<int> T{t};
            auto pv = ev.eval("d", T);
            const Vec* mv = value_at(dwi, T);
            std::optional<Vec> rhs;
            if (mv) rhs = *mv;
            if (!detail::maybe_equal(ctx, mm.dimH(), pv, rhs, ctx.one()))
                note(fail_degree0, T, "degree0 materialized d");
        }
    }

    auto line = [&](const char* id, int fails) {
        rep.add(id, fails == 0,
                std::to_string(fails) + " failures; first: " + first_witness);
    };
    line("identity.coboundary_nilpotent", fail_dh);
    line("identity.extension_commutation", fail_comm);
    line("identity.coface_commutation", fail_coface_comm);
    line("identity.total_power_collapse", fail_total);
    line("identity.coface_decomposition", fail_decomp);
    line("identity.extension_nilpotent", fail_ah);
    line("identity.degree0_materialized_agreement", fail_degree0);
    if (alg.full_table()) line("identity.materialized_cross_checks", fail_materialized);
    rep.add("identity.exercised", exercised > 0,
            "no nonzero evaluation was ever reached");
    return rep;
}

// ---------------------------------------------------------------------------
// Degree-zero kernel study: the joint machinery behind the prefactor
// identity, the kernel pinches and the image dimensions. For every state
// basis vector and every algebra basis element the values
// (d^n Psi)(1, .., 1, X) are computed pointwise; they simultaneously feed
//  - the exhaustive prefactor comparison against (prod geo_j) (d Psi)(X),
//  - the streamed constraint kernels K_n >= Ker(d^n|degree0) >= H_I whose
//    dimension pinch certifies Ker(d^n|degree0) = H_I exactly.
// ---------------------------------------------------------------------------

namespace detail {

struct DegreeZeroStudy {
    std::vector<Subspace> kernels;     // kernels[n-1] ~ Ker(d^n | degree 0), n = 1..h-1
    std::vector<bool> kernel_pinched;  // computed kernel == invariant subspace
    std::vector<bool> prefactor_ok;    // exhaustive identity per n
    std::vector<Scalar> prefactors;    // prod_{j=2..n} geo_j
    bool invariants_act_by_counit = true;
};

inline DegreeZeroStudy degree_zero_study(const ZeroModeModel& mm, const ImageAlgebra& alg) {
    const FieldContext& ctx = mm.ctx();
    const int h = mm.h, N = mm.dimH(), dim = alg.dim();
    DegreeZeroStudy st;

    // The scalar action on the invariant subspace is the structural lower
    // bound H_I <= Ker(d) <= Ker(d^n) used by every pinch below.
    for (int r = 0; r < mm.H_I.basis().rows() && st.invariants_act_by_counit; ++r) {
        Vec v = dense_row(mm.H_I.basis(), r);
        for (int i = 0; i < dim; ++i) {
            Vec img = alg.matrix_of(i).apply(v);
            Vec expect = v;
            for (auto& x : expect) x = x * alg.counit_of(i);
            if (!is_zero_vec(sub_vec(img, expect))) {
                st.invariants_act_by_counit = false;
                break;
            }
        }
    }

    for (int n = 1; n <= h - 1; ++n) {
        Scalar pref = ctx.one();
        for (int j = 2; j <= n; ++j) pref *= q2_geometric_sum(ctx, j);
        st.prefactors.push_back(pref);
    }

    // Evaluate (d^n e_i)(1,..,1,X) for every basis vector and constraint
    // source, comparing against the prefactor formula and collecting the
    // constraint rows; the kernel is recomputed batchwise and the loop stops
    // early once it has pinched down to the invariant subspace.
    std::vector<std::vector<Vec>> rows(static_cast<size_t>(h - 1));
    std::vector<bool> pref_ok(static_cast<size_t>(h - 1), true);
    std::vector<bool> pinched(static_cast<size_t>(h - 1), false);
    std::vector<Subspace> kernels(static_cast<size_t>(h - 1));

    std::vector<Cochain> basis_cochains;
    std::vector<std::unique_ptr<WordEvaluator>> evaluators;
    basis_cochains.reserve(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        Vec e = zero_vec(ctx, N);
        e[static_cast<size_t>(i)] = ctx.one();
        basis_cochains.push_back(state_cochain(e));
    }
    for (int i = 0; i < N; ++i)
        evaluators.push_back(std::make_unique<WordEvaluator>(alg, mm, basis_cochains[static_cast<size_t>(i)]));

    auto flush_kernel = [&](int n_idx) {
        if (pinched[static_cast<size_t>(n_idx)]) return;
        ExactMatrix m(ctx, static_cast<int>(rows[static_cast<size_t>(n_idx)].size()), N);
        for (int r = 0; r < m.rows(); ++r) {
            const Vec& row = rows[static_cast<size_t>(n_idx)][static_cast<size_t>(r)];
            for (int c = 0; c < N; ++c)
                if (!row[static_cast<size_t>(c)].is_zero()) m.set(r, c, row[static_cast<size_t>(c)]);
        }
        kernels[static_cast<size_t>(n_idx)] =
            Subspace::from_vectors(ctx, N, kernel_basis(m));
        if (kernels[static_cast<size_t>(n_idx)] == mm.H_I) pinched[static_cast<size_t>(n_idx)] = true;
    };

    const int batch = 16;
    for (int X = 0; X < dim; ++X) {
        bool need_rows = false;
        for (int n = 1; n <= h - 1; ++n)
            if (!pinched[static_cast<size_t>(n - 1)]) need_rows = true;
        for (int n = 1; n <= h - 1; ++n) {
            const std::string word(static_cast<size_t>(n), 'd');
            std::vector<int> T(static_cast<size_t>(n), alg.unit_index);
            T.back() = X;
            // constraint rows, transposed: row r has entry [i] = value[r]
            std::vector<Vec> local(static_cast<size_t>(N));
            bool any = false;
            for (int i = 0; i < N; ++i) {
                auto v = evaluators[static_cast<size_t>(i)]->eval(word, T);
                // prefactor comparison: pref * (M_X e_i - eps(X) e_i)
                Vec direct = alg.matrix_of(X).apply(basis_cochains[static_cast<size_t>(i)]
                                                        .coeffs.begin()->second);
                direct[static_cast<size_t>(i)] -= alg.counit_of(X);
                const Scalar& pref = st.prefactors[static_cast<size_t>(n - 1)];
                for (auto& x : direct)
                    if (!x.is_zero()) x = x * pref;
                if (!detail::maybe_equal(ctx, N, v, std::optional<Vec>(std::move(direct)),
                                         ctx.one()))
                    pref_ok[static_cast<size_t>(n - 1)] = false;
                if (v && (need_rows && !pinched[static_cast<size_t>(n - 1)])) {
                    for (int r = 0; r < N; ++r) {
                        if ((*v)[static_cast<size_t>(r)].is_zero()) continue;
                        if (local[static_cast<size_t>(r)].empty())
                            local[static_cast<size_t>(r)] = zero_vec(ctx, N);
                        local[static_cast<size_t>(r)][static_cast<size_t>(i)] =
                            (*v)[static_cast<size_t>(r)];
                        any = true;
                    }
                }
            }
            if (any)
                for (auto& row : local)
                    if (!row.empty()) rows[static_cast<size_t>(n - 1)].push_back(std::move(row));
        }
        if ((X + 1) % batch == 0)
            for (int n = 1; n <= h - 1; ++n) flush_kernel(n - 1);
    }
    for (int n = 1; n <= h - 1; ++n) flush_kernel(n - 1);

    st.kernels = std::move(kernels);
    for (int n = 1; n <= h - 1; ++n) {
        st.kernel_pinched.push_back(pinched[static_cast<size_t>(n - 1)]);
        st.prefactor_ok.push_back(pref_ok[static_cast<size_t>(n - 1)]);
    }
    return st;
}

} // namespace detail

// The collapse of iterated coboundaries on degree zero: the exhaustive
// prefactor identity, the nonvanishing of the prefactor below the height,
// the kernel pinches identifying Ker(d^n|degree0) with the invariant
// subspace for every n < h, and an explicit non-member witness.
inline CheckReport verify_lemma2(const ZeroModeModel& mm, const ImageAlgebra& alg,
                                 const detail::DegreeZeroStudy& st) {
    const FieldContext& ctx = mm.ctx();
    const int h = mm.h, N = mm.dimH();
    CheckReport rep;
    rep.suite = "hochschild.lemma2";
    rep.h = h;

    rep.add("kernel.invariants_act_by_counit", st.invariants_act_by_counit);
    for (int n = 1; n <= h - 1; ++n) {
        rep.add("prefactor.full_basis_n" + std::to_string(n),
                st.prefactor_ok[static_cast<size_t>(n - 1)]);
        rep.add("prefactor.nonzero_n" + std::to_string(n),
                !st.prefactors[static_cast<size_t>(n - 1)].is_zero());
    }
    // At n = h the prefactor acquires the vanishing geometric sum; this is
    // the structural reason the iterated coboundary collapses on degree 0.
    rep.add("prefactor.vanishes_at_height", q2_geometric_sum(ctx, h).is_zero());

    bool all_pinched = true;
    for (int n = 1; n <= h - 1; ++n) {
        bool ok = st.kernel_pinched[static_cast<size_t>(n - 1)] &&
                  st.kernels[static_cast<size_t>(n - 1)] == mm.H_I;
        if (!ok) all_pinched = false;
        rep.add("kernel.power_n" + std::to_string(n) + "_equals_invariants", ok,
                "computed kernel dim " +
                    std::to_string(st.kernels[static_cast<size_t>(n - 1)].dim()) + ", expected " +
                    std::to_string(2 * h - 1));
    }
    rep.add("kernel.all_powers_agree", all_pinched);

    // A state outside the invariant subspace is detected by the coboundary
    // at a single special tuple, at every order below the height.
    {
        std::mt19937_64 rng(0x5eedULL);
        bool witness_ok = false;
        std::string witness;
        for (int attempt = 0; attempt < 8 && !witness_ok; ++attempt) {
            Vec psi = zero_vec(ctx, N);
            for (int e = 0; e < 3; ++e)
                psi[rng() % psi.size()] = random_palette_scalar(ctx, rng, /*allow_zero=*/false);
            if (mm.H_I.contains(psi)) continue;
            int found_x = -1;
            for (int X = 0; X < alg.dim(); ++X) {
                Vec img = alg.matrix_of(X).apply(psi);
                Vec expect = psi;
                for (auto& x : expect) x = x * alg.counit_of(X);
                if (!is_zero_vec(sub_vec(img, expect))) {
                    found_x = X;
                    break;
                }
            }
            if (found_x < 0) continue;
            Cochain w = state_cochain(psi);
            WordEvaluator ev(alg, mm, w);
            bool all_orders = true;
            for (int n = 1; n <= h - 1; ++n) {
                std::vector<int> T(static_cast<size_t>(n), alg.unit_index);
                T.back() = found_x;
                auto v = ev.eval(std::string(static_cast<size_t>(n), 'd'), T);
                if (!v) all_orders = false;
            }
            witness_ok = all_orders;
            witness = "argument index " + std::to_string(found_x);
        }
        rep.add("witness.nonmember_detected_at_all_orders", witness_ok, witness);
    }
    return rep;
}

inline CheckReport verify_lemma2(const ZeroModeModel& mm, const ImageAlgebra& alg) {
    return verify_lemma2(mm, alg, detail::degree_zero_study(mm, alg));
}

// Image dimensions of the iterated coboundary out of degree zero: constant
// at dim H - (2h - 1) for all orders below the height, and zero from the
// height onwards.
inline CheckReport verify_prop4(const ZeroModeModel& mm, const ImageAlgebra& alg,
                                const detail::DegreeZeroStudy& st) {
    const FieldContext& ctx = mm.ctx();
    const int h = mm.h, N = mm.dimH();
    CheckReport rep;
    rep.suite = "hochschild.prop4";
    rep.h = h;

    for (int n = 1; n <= h - 1; ++n) {
        bool pinched = st.kernel_pinched[static_cast<size_t>(n - 1)];
        int image_dim = N - st.kernels[static_cast<size_t>(n - 1)].dim();
        rep.add("image.dim_power_n" + std::to_string(n),
                pinched && image_dim == N - (2 * h - 1),
                "dim " + std::to_string(image_dim) + ", expected " +
                    std::to_string(N - (2 * h - 1)));
    }

    // From order h on, the iterated coboundary kills every degree-zero
    // cochain: exhaustively over the state basis at the special tuples.
    {
        bool ok = true;
        for (int i = 0; i < N && ok; ++i) {
            Vec e = zero_vec(ctx, N);
            e[static_cast<size_t>(i)] = ctx.one();
            Cochain w = state_cochain(e);
            WordEvaluator ev(alg, mm, w);
            for (int X = 0; X < alg.dim(); ++X) {
                std::vector<int> T(static_cast<size_t>(h), alg.unit_index);
                T.back() = X;
                if (ev.eval(std::string(static_cast<size_t>(h), 'd'), T)) {
                    ok = false;
                    break;
                }
            }
        }
        rep.add("image.vanishes_at_power_h", ok);
    }
    return rep;
}

inline CheckReport verify_prop4(const ZeroModeModel& mm, const ImageAlgebra& alg) {
    return verify_prop4(mm, alg, detail::degree_zero_study(mm, alg));
}

// ---------------------------------------------------------------------------
// The degree-zero filtration of the total differential's homology, computed
// along two independent routes:
//
//  (direct) cocycles and coboundaries are characterized inside the cochain
//  complex itself. The cocycle space {Psi : Q^k Psi = 0} is caught between a
//  streamed constraint kernel (top components (d^k Psi)(1,..,1,X) and the
//  bottom component A^k Psi of Q^k Psi) from above and the structurally
//  verified subspace Ker(A^k) /\ H_I from below; equality of dimensions
//  certifies the characterization. Likewise the degree-zero preimages under
//  Q^{h-k} are caught between the streamed kernel of the higher components
//  of Q^{h-k} and H_I, making the available coboundaries exactly
//  A^{h-k}(H_I).
//
//  (characterized) plain subspace algebra on the state space:
//  (Ker A^k /\ H_I) / A^{h-k}(H_I).
// ---------------------------------------------------------------------------

struct F0Result {
    int k = 0;
    int dim_direct = -1;
    int dim_characterized = -1;
    CheckReport checks;
};

inline F0Result filtered_homology_F0(const ZeroModeModel& mm, const ImageAlgebra& alg, int k) {
    const FieldContext& ctx = mm.ctx();
    const int h = mm.h, N = mm.dimH();
    if (k < 1 || k > h - 1) throw std::invalid_argument("filtration order must be in 1..h-1");
    F0Result res;
    res.k = k;
    CheckReport& rep = res.checks;
    rep.suite = "hochschild.theorem2";
    rep.h = h;

    ExactMatrix a_pow_k = mm.A.pow(k);
    ExactMatrix a_pow_hk = mm.A.pow(h - k);

    // Characterized route.
    Subspace ker_ak = Subspace::from_vectors(ctx, N, kernel_basis(a_pow_k));
    Subspace numerator_char = intersect(ker_ak, mm.H_I);
    std::vector<Vec> boundary_vecs;
    for (int r = 0; r < mm.H_I.basis().rows(); ++r)
        boundary_vecs.push_back(a_pow_hk.apply(dense_row(mm.H_I.basis(), r)));
    Subspace denominator_char = Subspace::from_vectors(ctx, N, boundary_vecs);

    rep.add("characterized.numerator_dim_k" + std::to_string(k),
            numerator_char.dim() == 2 * k,
            "dim " + std::to_string(numerator_char.dim()) + ", expected " + std::to_string(2 * k));
    rep.add("characterized.denominator_dim_k" + std::to_string(k),
            denominator_char.dim() == 2 * k - 1,
            "dim " + std::to_string(denominator_char.dim()) + ", expected " +
                std::to_string(2 * k - 1));
    bool nested = numerator_char.contains(denominator_char);
    rep.add("characterized.boundaries_are_cocycles_k" + std::to_string(k), nested);
    res.dim_characterized = nested ? quotient_dim_mod(numerator_char, denominator_char) : -1;

    // Direct route, cocycles: stream the end components of Q^k.
    std::vector<Cochain> basis_cochains;
    std::vector<std::unique_ptr<WordEvaluator>> evaluators;
    for (int i = 0; i < N; ++i) {
        Vec e = zero_vec(ctx, N);
        e[static_cast<size_t>(i)] = ctx.one();
        basis_cochains.push_back(state_cochain(e));
    }
    for (int i = 0; i < N; ++i)
        evaluators.push_back(
            std::make_unique<WordEvaluator>(alg, mm, basis_cochains[static_cast<size_t>(i)]));

    auto kernel_of_rows = [&](const std::vector<Vec>& rows) {
        ExactMatrix m(ctx, static_cast<int>(rows.size()), N);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < N; ++c)
                if (!rows[static_cast<size_t>(r)][static_cast<size_t>(c)].is_zero())
                    m.set(r, c, rows[static_cast<size_t>(r)][static_cast<size_t>(c)]);
        return Subspace::from_vectors(ctx, N, kernel_basis(m));
    };

    // Bottom component rows: A^k itself.
    std::vector<Vec> cocycle_rows;
    for (int r = 0; r < N; ++r) cocycle_rows.push_back(dense_row(a_pow_k, r));

    Subspace numerator_direct;
    bool numerator_pinched = false;
    {
        const std::string word(static_cast<size_t>(k), 'd');
        for (int X = 0; X < alg.dim() && !numerator_pinched; ++X) {
            std::vector<int> T(static_cast<size_t>(k), alg.unit_index);
            T.back() = X;
            std::vector<Vec> local(static_cast<size_t>(N));
            for (int i = 0; i < N; ++i) {
                auto v = evaluators[static_cast<size_t>(i)]->eval(word, T);
                if (!v) continue;
                for (int r = 0; r < N; ++r) {
                    if ((*v)[static_cast<size_t>(r)].is_zero()) continue;
                    if (local[static_cast<size_t>(r)].empty())
                        local[static_cast<size_t>(r)] = zero_vec(ctx, N);
                    local[static_cast<size_t>(r)][static_cast<size_t>(i)] =
                        (*v)[static_cast<size_t>(r)];
                }
            }
            for (auto& row : local)
                if (!row.empty()) cocycle_rows.push_back(std::move(row));
            if ((X + 1) % 16 == 0 || X + 1 == alg.dim()) {
                numerator_direct = kernel_of_rows(cocycle_rows);
                if (numerator_direct == numerator_char) numerator_pinched = true;
            }
        }
        if (!numerator_pinched) numerator_direct = kernel_of_rows(cocycle_rows);
    }
    rep.add("direct.cocycle_pinch_k" + std::to_string(k), numerator_direct == numerator_char,
            "streamed kernel dim " + std::to_string(numerator_direct.dim()) +
                ", characterized dim " + std::to_string(numerator_char.dim()));

    // Direct route, coboundaries: stream the higher components of Q^{h-k}
    // on degree-zero preimages; the kernel is the space of states whose
    // image under Q^{h-k} stays in degree zero.
    Subspace ghost_kernel;
    bool ghost_pinched = false;
    {
        std::vector<Vec> ghost_rows;
        std::vector<std::string> words;
        for (uint32_t mask = 0; mask < (1u << (h - k)); ++mask) {
            int dcount = __builtin_popcount(mask);
            if (dcount < 1) continue;
            std::string word;
            for (int b = h - k - 1; b >= 0; --b) word += ((mask >> b) & 1u) ? 'd' : 'a';
            words.push_back(std::move(word));
        }
        for (int X = 0; X < alg.dim() && !ghost_pinched; ++X) {
            std::map<std::pair<int, int>, Vec> rows_by_slot; // keyed by (d-count, coordinate)
            for (const std::string& word : words) {
                int dcount = static_cast<int>(std::count(word.begin(), word.end(), 'd'));
                std::vector<int> T(static_cast<size_t>(dcount), alg.unit_index);
                T.back() = X;
                for (int i = 0; i < N; ++i) {
                    auto v = evaluators[static_cast<size_t>(i)]->eval(word, T);
                    if (!v) continue;
                    for (int r = 0; r < N; ++r) {
                        if ((*v)[static_cast<size_t>(r)].is_zero()) continue;
                        auto key = std::make_pair(dcount, r);
                        auto it = rows_by_slot.find(key);
                        if (it == rows_by_slot.end())
                            it = rows_by_slot.emplace(key, zero_vec(ctx, N)).first;
                        it->second[static_cast<size_t>(i)] += (*v)[static_cast<size_t>(r)];
                    }
                }
            }
            for (auto& [key, row] : rows_by_slot)
                if (!is_zero_vec(row)) ghost_rows.push_back(std::move(row));
            if ((X + 1) % 16 == 0 || X + 1 == alg.dim()) {
                ghost_kernel = kernel_of_rows(ghost_rows);
                if (ghost_kernel == mm.H_I) ghost_pinched = true;
            }
        }
        if (!ghost_pinched) ghost_kernel = kernel_of_rows(ghost_rows);
    }
    rep.add("direct.preimage_pinch_k" + std::to_string(k), ghost_kernel == mm.H_I,
            "streamed kernel dim " + std::to_string(ghost_kernel.dim()) + ", expected " +
                std::to_string(2 * h - 1));

    // Spot-check: for invariant states every word containing a coboundary
    // letter vanishes at arbitrary tuples, not only at the streamed ones.
    {
        std::mt19937_64 rng(0xF0F0ULL + static_cast<uint64_t>(k));
        bool ok = true;
        for (int r = 0; r < mm.H_I.basis().rows() && ok; ++r) {
            Cochain w = state_cochain(dense_row(mm.H_I.basis(), r));
            WordEvaluator ev(alg, mm, w);
            for (uint32_t mask = 1; mask < (1u << (h - k)); ++mask) {
                int dcount = __builtin_popcount(mask);
                std::string word;
                for (int b = h - k - 1; b >= 0; --b) word += ((mask >> b) & 1u) ? 'd' : 'a';
                for (const auto& T : detail::sample_tuples(alg, w, dcount, rng, 3))
                    if (ev.eval(word, T)) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
        }
        rep.add("direct.invariant_words_vanish_k" + std::to_string(k), ok);
    }

    std::vector<Vec> direct_boundary_vecs;
    for (int r = 0; r < ghost_kernel.basis().rows(); ++r)
        direct_boundary_vecs.push_back(a_pow_hk.apply(dense_row(ghost_kernel.basis(), r)));
    Subspace denominator_direct = Subspace::from_vectors(ctx, N, direct_boundary_vecs);

    rep.add("direct.denominator_matches_k" + std::to_string(k),
            denominator_direct == denominator_char);
    bool nested_direct = numerator_direct.contains(denominator_direct);
    rep.add("direct.boundaries_are_cocycles_k" + std::to_string(k), nested_direct);
    res.dim_direct =
        nested_direct ? numerator_direct.dim() - denominator_direct.dim() : -1;

    // The two end components of Q^k really are the iterated coboundary and
    // the iterated extension: the bottom equals A^k applied to the state.
    {
        bool ok = true;
        for (int r = 0; r < mm.H_I.basis().rows() + 2 && ok; ++r) {
            Vec psi;
            if (r < mm.H_I.basis().rows()) {
                psi = dense_row(mm.H_I.basis(), r);
            } else {
                psi = zero_vec(ctx, N);
                psi[static_cast<size_t>((r * 7) % N)] = ctx.one();
            }
            Cochain w = state_cochain(psi);
            WordEvaluator ev(alg, mm, w);
            auto bottom = ev.eval(std::string(static_cast<size_t>(k), 'a'), {});
            Vec expect = a_pow_k.apply(psi);
            if (!detail::maybe_equal(ctx, N, bottom, std::optional<Vec>(std::move(expect)),
                                     ctx.one()))
                ok = false;
        }
        rep.add("direct.bottom_component_is_extension_power_k" + std::to_string(k), ok);
    }

    rep.add("f0.routes_agree_k" + std::to_string(k),
            res.dim_direct == res.dim_characterized,
            "direct " + std::to_string(res.dim_direct) + ", characterized " +
                std::to_string(res.dim_characterized));
    rep.add("f0.dim_one_k" + std::to_string(k),
            res.dim_direct == 1 && res.dim_characterized == 1,
            "direct " + std::to_string(res.dim_direct) + ", characterized " +
                std::to_string(res.dim_characterized));
    return res;
}

inline CheckReport verify_theorem2(const ZeroModeModel& mm, const ImageAlgebra& alg) {
    CheckReport rep;
    rep.suite = "hochschild.theorem2";
    rep.h = mm.h;
    std::vector<int> ladder_dims =
        gen_homology(make_hdiff_space(mm.h, restrict_A_to_invariants(mm))).dims;
    for (int k = 1; k <= mm.h - 1; ++k) {
        F0Result r = filtered_homology_F0(mm, alg, k);
        for (auto& c : r.checks.checks) rep.checks.push_back(std::move(c));
        rep.add("f0.matches_invariant_homology_k" + std::to_string(k),
                r.dim_direct == ladder_dims[static_cast<size_t>(k - 1)],
                "filtration dim " + std::to_string(r.dim_direct) + ", homology dim " +
                    std::to_string(ladder_dims[static_cast<size_t>(k - 1)]));
    }
    return rep;
}

// The aggregate suite: algebra structure, identity battery, degree-zero
// collapse, image dimensions, and the two-route filtration computation.
inline CheckReport verify_hochschild(const ZeroModeModel& mm, uint64_t seed, int trials = 100) {
    ImageAlgebra alg = build_image_algebra(mm);
    if (mm.h <= 2) alg.materialize_full_table();

    CheckReport rep;
    rep.suite = "hochschild";
    rep.h = mm.h;
    rep.seed = seed;
    auto merge = [&](CheckReport sub) {
        for (auto& c : sub.checks) rep.checks.push_back(std::move(c));
    };
    merge(verify_image_algebra(mm, alg));
    merge(verify_cochain_identities(mm, alg, seed, trials));
    detail::DegreeZeroStudy study = detail::degree_zero_study(mm, alg);
    merge(verify_lemma2(mm, alg, study));
    merge(verify_prop4(mm, alg, study));
    merge(verify_theorem2(mm, alg));
    return rep;
}

} // namespace qh
