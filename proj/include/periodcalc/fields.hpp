#pragma once

#include "error.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace periodcalc {

// CM fields are modeled purely combinatorially: a field F = F+K is its
// degree n over the fixed quadratic imaginary field K, the indexed complex
// embeddings sigma_1..sigma_n trivial on K (plus their conjugates), and a
// permutation giving the action of a generator of Gal(F/K) on indices.
// No element arithmetic is ever performed.

struct FieldId {
    std::uint32_t value = 0;
    friend bool operator==(FieldId a, FieldId b) { return a.value == b.value; }
    friend bool operator!=(FieldId a, FieldId b) { return a.value != b.value; }
    friend bool operator<(FieldId a, FieldId b) { return a.value < b.value; }
};

// sigma_index with a conjugation flag; "~s3" denotes the conjugate of s3.
struct EmbeddingRef {
    int index = 1; // 1-based
    bool barred = false;

    friend bool operator==(const EmbeddingRef& a, const EmbeddingRef& b)
    {
        return a.index == b.index && a.barred == b.barred;
    }
    friend bool operator<(const EmbeddingRef& a, const EmbeddingRef& b)
    {
        return a.index != b.index ? a.index < b.index : a.barred < b.barred;
    }
};

inline EmbeddingRef conjugate(EmbeddingRef e) { return {e.index, !e.barred}; }

struct CMFieldSpec {
    std::string name;
    int degree_over_k = 1;
    bool cyclic_over_k = true;
    std::vector<int> galois_generator; // images of 1..n, 1-based; empty = cyclic shift
};

// A subset Psi of the embeddings with Psi and its conjugate disjoint.
// Stored sorted, set semantics.
class CMType {
public:
    CMType() = default;
    CMType(FieldId field, std::vector<EmbeddingRef> members) : field_(field), members_(std::move(members))
    {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        for (std::size_t i = 0; i + 1 < members_.size(); ++i)
            require(members_[i].index != members_[i + 1].index,
                    "CM type contains an embedding together with its conjugate: index " +
                        std::to_string(members_[i].index));
    }

    FieldId field() const { return field_; }
    const std::vector<EmbeddingRef>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    bool contains(EmbeddingRef e) const
    {
        return std::binary_search(members_.begin(), members_.end(), e);
    }

    CMType conjugated() const
    {
        std::vector<EmbeddingRef> out;
        out.reserve(members_.size());
        for (auto e : members_)
            out.push_back(conjugate(e));
        return CMType(field_, std::move(out));
    }

    // Full: every index 1..n occurs exactly once (barred or not).
    bool is_full(int degree) const
    {
        if (static_cast<int>(members_.size()) != degree)
            return false;
        for (int i = 0; i < degree; ++i)
            if (members_[static_cast<std::size_t>(i)].index != i + 1)
                return false;
        return true;
    }

    int unbarred_count() const
    {
        int c = 0;
        for (auto e : members_)
            if (!e.barred)
                ++c;
        return c;
    }

    friend bool operator==(const CMType& a, const CMType& b)
    {
        return a.field_ == b.field_ && a.members_ == b.members_;
    }
    friend bool operator<(const CMType& a, const CMType& b)
    {
        if (a.field_ != b.field_)
            return a.field_ < b.field_;
        return a.members_ < b.members_;
    }

private:
    FieldId field_{};
    std::vector<EmbeddingRef> members_;
};

inline CMType conjugate_cm_type(const CMType& psi) { return psi.conjugated(); }

namespace detail {

inline int permutation_order(const std::vector<int>& g)
{
    const int n = static_cast<int>(g.size());
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    long long order = 1;
    for (int i = 0; i < n; ++i) {
        if (seen[static_cast<std::size_t>(i)])
            continue;
        int len = 0, j = i;
        while (!seen[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = true;
            j = g[static_cast<std::size_t>(j)] - 1;
            ++len;
        }
        order = std::lcm(order, static_cast<long long>(len));
    }
    return static_cast<int>(order);
}

} // namespace detail

struct FieldRecord {
    CMFieldSpec spec;
    // Set when the field was declared as a compositum F * F2.
    std::optional<FieldId> parent_left;
    std::optional<FieldId> parent_right;

    int degree() const { return spec.degree_over_k; }
    const std::string& name() const { return spec.name; }
};

// Append-only registry; FieldId 0 is always the base field K itself.
class FieldRegistry {
public:
    FieldRegistry()
    {
        CMFieldSpec k;
        k.name = "K";
        k.degree_over_k = 1;
        k.cyclic_over_k = true;
        k.galois_generator = {1};
        records_.push_back(FieldRecord{k, std::nullopt, std::nullopt});
        by_name_["K"] = FieldId{0};
    }

    static FieldId base_k() { return FieldId{0}; }

    FieldId declare_field(CMFieldSpec spec)
    {
        require(!spec.name.empty(), "field name must be nonempty");
        require(by_name_.find(spec.name) == by_name_.end(), "duplicate field name: " + spec.name);
        require(spec.degree_over_k >= 1, "field degree must be >= 1");
        const int n = spec.degree_over_k;
        if (spec.galois_generator.empty()) {
            // Default Galois action: cyclic shift i -> i+1 (mod n).
            spec.galois_generator.resize(static_cast<std::size_t>(n));
            for (int i = 1; i <= n; ++i)
                spec.galois_generator[static_cast<std::size_t>(i - 1)] = i % n + 1;
        }
        require(static_cast<int>(spec.galois_generator.size()) == n,
                "galois generator of field " + spec.name + " must list images of 1.." + std::to_string(n));
        std::vector<bool> hit(static_cast<std::size_t>(n), false);
        for (int image : spec.galois_generator) {
            require(image >= 1 && image <= n, "galois generator image out of range in field " + spec.name);
            require(!hit[static_cast<std::size_t>(image - 1)], "galois generator is not a permutation in field " + spec.name);
            hit[static_cast<std::size_t>(image - 1)] = true;
        }
        const int order = detail::permutation_order(spec.galois_generator);
        if (spec.cyclic_over_k)
            require(order == n, "cyclic field " + spec.name + ": generator order " + std::to_string(order) +
                                    " != degree " + std::to_string(n));
        else
            require(n % order == 0, "field " + spec.name + ": generator order must divide the degree");
        records_.push_back(FieldRecord{spec, std::nullopt, std::nullopt});
        FieldId id{static_cast<std::uint32_t>(records_.size() - 1)};
        by_name_[spec.name] = id;
        return id;
    }

    // Compositum L = F * F2 of degree n*n2; linear disjointness is asserted
    // by the caller, not verified.  Embedding (j,k) is linearized as
    // (j-1)*n2 + k, so tau restricts to sigma_j on F and sigma'_k on F2.
    FieldId declare_compositum(const std::string& name, FieldId left, FieldId right)
    {
        require(left.value < records_.size() && right.value < records_.size(), "undeclared parent field");
        const auto& f = records_[left.value];
        const auto& g = records_[right.value];
        CMFieldSpec spec;
        spec.name = name;
        spec.degree_over_k = f.degree() * g.degree();
        spec.cyclic_over_k = false;
        spec.galois_generator.resize(static_cast<std::size_t>(spec.degree_over_k));
        for (int j = 1; j <= f.degree(); ++j)
            for (int k = 1; k <= g.degree(); ++k) {
                int jj = f.spec.galois_generator[static_cast<std::size_t>(j - 1)];
                int kk = g.spec.galois_generator[static_cast<std::size_t>(k - 1)];
                spec.galois_generator[static_cast<std::size_t>((j - 1) * g.degree() + k - 1)] =
                    (jj - 1) * g.degree() + kk;
            }
        FieldId id = declare_field(std::move(spec));
        records_[id.value].parent_left = left;
        records_[id.value].parent_right = right;
        return id;
    }

    const FieldRecord& operator[](FieldId id) const
    {
        require(id.value < records_.size(), "unknown field id");
        return records_[id.value];
    }

    std::optional<FieldId> by_name(const std::string& name) const
    {
        auto it = by_name_.find(name);
        if (it == by_name_.end())
            return std::nullopt;
        return it->second;
    }

    int pair_row(FieldId compositum, int index) const
    {
        const auto& rec = (*this)[compositum];
        require(rec.parent_right.has_value(), "field is not a compositum: " + rec.name());
        int n2 = (*this)[*rec.parent_right].degree();
        return (index - 1) / n2 + 1;
    }

    int pair_col(FieldId compositum, int index) const
    {
        const auto& rec = (*this)[compositum];
        require(rec.parent_right.has_value(), "field is not a compositum: " + rec.name());
        int n2 = (*this)[*rec.parent_right].degree();
        return (index - 1) % n2 + 1;
    }

    int pair_index(FieldId compositum, int row, int col) const
    {
        const auto& rec = (*this)[compositum];
        require(rec.parent_right.has_value(), "field is not a compositum: " + rec.name());
        int n2 = (*this)[*rec.parent_right].degree();
        return (row - 1) * n2 + col;
    }

    // Restriction of an embedding of `from` to the subfield `to`.  `to` must
    // be `from` itself, K, or a declared compositum parent of `from`.
    EmbeddingRef restrict_embedding(FieldId from, EmbeddingRef e, FieldId to) const
    {
        const auto& rec = (*this)[from];
        require(e.index >= 1 && e.index <= rec.degree(), "embedding index out of range for field " + rec.name());
        if (to == from)
            return e;
        if (to == base_k())
            return EmbeddingRef{1, e.barred};
        if (rec.parent_left && *rec.parent_left == to)
            return EmbeddingRef{pair_row(from, e.index), e.barred};
        if (rec.parent_right && *rec.parent_right == to)
            return EmbeddingRef{pair_col(from, e.index), e.barred};
        throw Error("no restriction map from " + rec.name() + " to " + (*this)[to].name());
    }

    bool restricts_to(FieldId from, FieldId to) const
    {
        const auto& rec = (*this)[from];
        return to == from || to == base_k() || (rec.parent_left && *rec.parent_left == to) ||
               (rec.parent_right && *rec.parent_right == to);
    }

    std::size_t size() const { return records_.size(); }

private:
    std::vector<FieldRecord> records_;
    std::map<std::string, FieldId> by_name_;
};

// A coefficient field, possibly a join ("E(chi)*E(eta)*K") of declared
// atoms.  Q is the empty join and is contained in everything.
struct CoeffField {
    std::set<std::string> atoms;

    CoeffField() = default;
    explicit CoeffField(std::string atom)
    {
        if (atom != "Q")
            atoms.insert(std::move(atom));
    }

    static CoeffField rationals() { return CoeffField{}; }

    CoeffField joined(const CoeffField& other) const
    {
        CoeffField out = *this;
        out.atoms.insert(other.atoms.begin(), other.atoms.end());
        return out;
    }

    bool is_rationals() const { return atoms.empty(); }

    std::string to_string() const
    {
        if (atoms.empty())
            return "Q";
        std::string s;
        for (const auto& a : atoms) {
            if (!s.empty())
                s += "*";
            s += a;
        }
        return s;
    }

    friend bool operator==(const CoeffField& a, const CoeffField& b) { return a.atoms == b.atoms; }
};

// Declared-containment lattice of coefficient fields.  Containment is the
// reflexive-transitive closure of declared pairs; Q is contained in every
// field.  Absorption queries are default-deny: nothing is contained in
// anything unless declared.
class FieldLattice {
public:
    void declare(const std::string& atom)
    {
        if (atom != "Q")
            atoms_.insert(atom);
    }

    bool declared(const std::string& atom) const { return atom == "Q" || atoms_.count(atom) > 0; }

    void declare_contains(const std::string& sub, const std::string& super)
    {
        declare(sub);
        declare(super);
        if (sub == "Q")
            return;
        contains_[super].insert(sub);
    }

    // True iff the atom `sub` is contained in the join `super`.
    bool atom_leq(const std::string& sub, const CoeffField& super) const
    {
        if (sub == "Q")
            return true;
        std::set<std::string> seen;
        std::vector<std::string> stack(super.atoms.begin(), super.atoms.end());
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            if (cur == sub)
                return true;
            if (!seen.insert(cur).second)
                continue;
            auto it = contains_.find(cur);
            if (it != contains_.end())
                for (const auto& below : it->second)
                    stack.push_back(below);
        }
        return false;
    }

    bool leq(const CoeffField& sub, const CoeffField& super) const
    {
        for (const auto& a : sub.atoms)
            if (!atom_leq(a, super))
                return false;
        return true;
    }

    void require_declared(const CoeffField& e) const
    {
        for (const auto& a : e.atoms)
            require(declared(a), "coefficient field not declared in lattice: " + a);
    }

    // Symbols declared to be units of some field beyond the built-in rules
    // (e.g. a discriminant root asserted rational).  Keys are canonical
    // symbol renderings.
    void declare_absorbable(const std::string& symbol_key, const std::string& atom)
    {
        declare(atom);
        absorbable_[symbol_key] = atom;
    }

    const std::string* absorbing_atom(const std::string& symbol_key) const
    {
        auto it = absorbable_.find(symbol_key);
        return it == absorbable_.end() ? nullptr : &it->second;
    }

private:
    std::set<std::string> atoms_;
    std::map<std::string, std::set<std::string>> contains_; // super -> directly contained atoms
    std::map<std::string, std::string> absorbable_;
};

} // namespace periodcalc
