#pragma once

#include "fields.hpp"
#include "rational.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace periodcalc {

// The archimedean component of an algebraic Hecke character of F, encoded as
// one exponent pair (a_i, b_i) per embedding sigma_i trivial on K; the value
// at infinity is prod sigma_i(z)^{a_i} * conj(sigma_i(z))^{b_i}.  Exponents
// are exact rationals with denominator dividing 2 (halves enter through the
// normalized induction in even degree).
struct InfinityType {
    FieldId field{};
    std::vector<std::pair<Rational, Rational>> exps;

    int degree() const { return static_cast<int>(exps.size()); }

    friend bool operator==(const InfinityType& x, const InfinityType& y)
    {
        return x.field == y.field && x.exps == y.exps;
    }
};

inline InfinityType make_infinity_type(FieldId field, std::vector<std::pair<Rational, Rational>> exps)
{
    for (const auto& [a, b] : exps)
        require(denominator_divides_two(a) && denominator_divides_two(b),
                "infinity type exponents must have denominator dividing 2");
    return InfinityType{field, std::move(exps)};
}

inline InfinityType trivial_infinity_type(FieldId field, int degree)
{
    return InfinityType{field, std::vector<std::pair<Rational, Rational>>(static_cast<std::size_t>(degree),
                                                                           {Rational(0), Rational(0)})};
}

// chi-check = chi^{-1,c}: (a_i, b_i) -> (-b_i, -a_i).  Involution.
inline InfinityType check_transform(const InfinityType& chi)
{
    InfinityType out = chi;
    for (auto& [a, b] : out.exps) {
        auto na = -b;
        auto nb = -a;
        a = na;
        b = nb;
    }
    return out;
}

// chi^c: (a_i, b_i) -> (b_i, a_i).
inline InfinityType conjugate_transform(const InfinityType& chi)
{
    InfinityType out = chi;
    for (auto& [a, b] : out.exps)
        std::swap(a, b);
    return out;
}

inline InfinityType inverse_transform(const InfinityType& chi)
{
    InfinityType out = chi;
    for (auto& [a, b] : out.exps) {
        a = -a;
        b = -b;
    }
    return out;
}

inline InfinityType multiply(const InfinityType& x, const InfinityType& y)
{
    require(x.field == y.field && x.degree() == y.degree(), "cannot multiply characters over different fields");
    InfinityType out = x;
    for (int i = 0; i < x.degree(); ++i) {
        out.exps[static_cast<std::size_t>(i)].first += y.exps[static_cast<std::size_t>(i)].first;
        out.exps[static_cast<std::size_t>(i)].second += y.exps[static_cast<std::size_t>(i)].second;
    }
    return out;
}

// Pullback along the norm from K: every index of F receives eta's pair.
inline InfinityType norm_pullback(const InfinityType& eta, FieldId target, int target_degree)
{
    require(eta.degree() == 1, "norm pullback source must be a character over K");
    InfinityType out;
    out.field = target;
    out.exps.assign(static_cast<std::size_t>(target_degree), eta.exps[0]);
    return out;
}

struct CharacterPredicates {
    bool algebraic = false;     // all exponents integers
    bool motivic = false;       // a_i + b_i constant
    bool critical = false;      // a_i != b_i for all i
    bool regular = false;       // a_i pairwise distinct
    bool conjugate_self_dual = false; // b_i = -a_i
    bool very_regular = false;  // sorted a-gaps >= 3
    Rational weight{0};         // -(a_i+b_i) when motivic
};

inline CharacterPredicates predicates(const InfinityType& chi)
{
    CharacterPredicates p;
    p.algebraic = true;
    p.motivic = true;
    p.critical = true;
    p.regular = true;
    p.conjugate_self_dual = true;
    for (const auto& [a, b] : chi.exps) {
        if (!is_integer(a) || !is_integer(b))
            p.algebraic = false;
        if (a == b)
            p.critical = false;
        if (b != -a)
            p.conjugate_self_dual = false;
    }
    if (!chi.exps.empty()) {
        Rational w0 = -(chi.exps[0].first + chi.exps[0].second);
        for (const auto& [a, b] : chi.exps)
            if (-(a + b) != w0)
                p.motivic = false;
        if (p.motivic)
            p.weight = w0;
    }
    std::vector<Rational> as;
    for (const auto& [a, b] : chi.exps)
        as.push_back(a);
    std::sort(as.begin(), as.end(), std::greater<Rational>());
    for (std::size_t i = 0; i + 1 < as.size(); ++i)
        if (as[i] == as[i + 1])
            p.regular = false;
    p.very_regular = p.regular;
    for (std::size_t i = 0; i + 1 < as.size(); ++i)
        if (as[i] - as[i + 1] < Rational(3))
            p.very_regular = false;
    return p;
}

// The unique CM type compatible with a critical chi: sigma_i iff a_i < b_i.
inline CMType compatible_cm_type(const InfinityType& chi)
{
    std::vector<EmbeddingRef> members;
    for (int i = 0; i < chi.degree(); ++i) {
        const auto& [a, b] = chi.exps[static_cast<std::size_t>(i)];
        require(a != b, "character is not critical at index " + std::to_string(i + 1));
        members.push_back(EmbeddingRef{i + 1, a >= b});
    }
    return CMType(chi.field, std::move(members));
}

// Image of chi under the k-th power of the Galois generator; the exponent
// pair at slot i moves to slot g(i).
inline InfinityType galois_twist(const InfinityType& chi, const FieldRegistry& fields, int k)
{
    const auto& rec = fields[chi.field];
    require(rec.spec.cyclic_over_k, "galois twist requires a field cyclic over K");
    const int n = rec.degree();
    require(chi.degree() == n, "infinity type length does not match field degree");
    InfinityType out = chi;
    k = ((k % n) + n) % n;
    for (int step = 0; step < k; ++step) {
        InfinityType next = out;
        for (int i = 1; i <= n; ++i)
            next.exps[static_cast<std::size_t>(rec.spec.galois_generator[static_cast<std::size_t>(i - 1)] - 1)] =
                out.exps[static_cast<std::size_t>(i - 1)];
        out = next;
    }
    return out;
}

// Necessary condition for chi != chi^tau for all nontrivial tau in Gal(F/K),
// checked at the infinity-type level only.
inline bool is_primitive_at_infinity(const InfinityType& chi, const FieldRegistry& fields)
{
    const int n = fields[chi.field].degree();
    for (int k = 1; k < n; ++k)
        if (galois_twist(chi, fields, k) == chi)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Character registry.
//
// The rewrite engine needs character identities, not just infinity types:
// which CM period symbols cancel depends on how a character was built.  A
// character value is a formal product of transformed base characters plus a
// power of the adelic norm.  check/conj are pushed onto the atoms, products
// are flattened and sorted, so structural equality is definitional equality.
// Atoms over a subfield F0 of the value's field are implicit norm pullbacks.

struct CharId {
    std::uint32_t value = 0;
    friend bool operator==(CharId a, CharId b) { return a.value == b.value; }
    friend bool operator!=(CharId a, CharId b) { return a.value != b.value; }
    friend bool operator<(CharId a, CharId b) { return a.value < b.value; }
};

struct BaseCharacter {
    std::string name;
    FieldId field{};
    InfinityType inftype;
    bool conj_self_dual = false;
    bool supercuspidal_asserted = false; // the local-distinctness hypothesis, asserted not computed
    bool psi_distinguished = false;      // the fixed psi with psi*psi^c = ||.||
    std::string rationality_field;       // lattice atom, e.g. "E(chi)"
};

struct CharAtom {
    std::uint32_t base = 0; // index into base table
    bool check = false;
    bool conj = false;

    friend bool operator==(const CharAtom& a, const CharAtom& b)
    {
        return a.base == b.base && a.check == b.check && a.conj == b.conj;
    }
    friend bool operator<(const CharAtom& a, const CharAtom& b)
    {
        if (a.base != b.base)
            return a.base < b.base;
        if (a.check != b.check)
            return a.check < b.check;
        return a.conj < b.conj;
    }
};

struct CharValue {
    FieldId field{};                 // field the value lives over
    std::map<CharAtom, int> atoms;   // atom -> nonzero multiplicity
    Rational norm_power{0};          // kappa: contributes ||.||^kappa

    friend bool operator==(const CharValue& a, const CharValue& b)
    {
        return a.field == b.field && a.atoms == b.atoms && a.norm_power == b.norm_power;
    }
    friend bool operator<(const CharValue& a, const CharValue& b)
    {
        if (!(a.field == b.field))
            return a.field < b.field;
        if (a.atoms != b.atoms)
            return a.atoms < b.atoms;
        return a.norm_power < b.norm_power;
    }
};

class CharacterRegistry {
public:
    explicit CharacterRegistry(const FieldRegistry* fields) : fields_(fields) {}

    CharId declare_base(BaseCharacter base)
    {
        require(!base.name.empty(), "character name must be nonempty");
        require(by_name_.find(base.name) == by_name_.end(), "duplicate character name: " + base.name);
        require(base.inftype.degree() == (*fields_)[base.field].degree(),
                "character " + base.name + ": infinity type length does not match field degree");
        if (base.conj_self_dual)
            for (const auto& [a, b] : base.inftype.exps)
                require(b == -a, "character " + base.name + " flagged conjugate self-dual but b_i != -a_i");
        if (base.rationality_field.empty())
            base.rationality_field = "E(" + base.name + ")";
        bases_.push_back(base);
        CharValue v;
        v.field = base.field;
        v.atoms[CharAtom{static_cast<std::uint32_t>(bases_.size() - 1), false, false}] = 1;
        CharId id = intern(v);
        by_name_[base.name] = id;
        return id;
    }

    std::optional<CharId> by_name(const std::string& name) const
    {
        auto it = by_name_.find(name);
        if (it == by_name_.end())
            return std::nullopt;
        return it->second;
    }

    const CharValue& value(CharId id) const
    {
        require(id.value < values_.size(), "unknown character id");
        return values_[id.value];
    }

    const BaseCharacter& base(std::uint32_t index) const { return bases_.at(index); }

    CharId norm_power(const Rational& kappa, FieldId field)
    {
        CharValue v;
        v.field = field;
        v.norm_power = kappa;
        return intern(v);
    }

    CharId trivial(FieldId field) { return norm_power(Rational(0), field); }

    CharId check(CharId id)
    {
        CharValue v = values_[id.value];
        std::map<CharAtom, int> atoms;
        for (const auto& [atom, mult] : v.atoms) {
            CharAtom flipped = atom;
            flipped.check = !flipped.check;
            atoms[flipped] += mult;
        }
        v.atoms = std::move(atoms);
        v.norm_power = -v.norm_power;
        return intern(v);
    }

    CharId conj(CharId id)
    {
        CharValue v = values_[id.value];
        std::map<CharAtom, int> atoms;
        for (const auto& [atom, mult] : v.atoms) {
            CharAtom flipped = atom;
            flipped.conj = !flipped.conj;
            atoms[flipped] += mult;
        }
        v.atoms = std::move(atoms);
        return intern(v);
    }

    CharId multiply(CharId x, CharId y)
    {
        const CharValue& a = values_[x.value];
        const CharValue& b = values_[y.value];
        require(a.field == b.field, "cannot multiply characters over different fields");
        CharValue v = a;
        for (const auto& [atom, mult] : b.atoms)
            v.atoms[atom] += mult;
        v.norm_power += b.norm_power;
        return intern(v);
    }

    CharId inverse(CharId id)
    {
        CharValue v = values_[id.value];
        for (auto& [atom, mult] : v.atoms)
            mult = -mult;
        v.norm_power = -v.norm_power;
        return intern(v);
    }

    // Pullback along the norm to `target`; atoms keep their own base field,
    // the value's field changes.  Requires a restriction map back down.
    CharId pullback(CharId id, FieldId target)
    {
        const CharValue& a = values_[id.value];
        require(fields_->restricts_to(target, a.field),
                "no norm map from " + (*fields_)[target].name() + " down to " + (*fields_)[a.field].name());
        CharValue v = a;
        v.field = target;
        return intern(v);
    }

    bool is_single_atom(CharId id) const
    {
        const CharValue& v = values_[id.value];
        return v.norm_power == Rational(0) && v.atoms.size() == 1 && v.atoms.begin()->second == 1;
    }

    CharId single_atom_value(CharAtom atom, FieldId field)
    {
        CharValue v;
        v.field = field;
        v.atoms[atom] = 1;
        return intern(v);
    }

    bool is_pure_norm_power(CharId id) const { return values_[id.value].atoms.empty(); }

    // Field the single atom's base character lives over.
    FieldId atom_field(CharId id) const
    {
        const CharValue& v = values_[id.value];
        require(v.atoms.size() == 1 && v.norm_power == Rational(0) && v.atoms.begin()->second == 1,
                "character is not a single atom");
        return bases_[v.atoms.begin()->first.base].field;
    }

    // A single-atom value considered over the atom's own base field.
    CharId descend_to_atom_field(CharId id)
    {
        CharValue v = values_[id.value];
        v.field = bases_[v.atoms.begin()->first.base].field;
        return intern(v);
    }

    // True when every atom of the value is conjugate self-dual; the product
    // of csd characters is csd.
    bool conj_self_dual(CharId id) const
    {
        const CharValue& v = values_[id.value];
        if (v.norm_power != Rational(0))
            return false;
        for (const auto& [atom, mult] : v.atoms) {
            (void)mult;
            if (!bases_[atom.base].conj_self_dual)
                return false;
        }
        return !v.atoms.empty();
    }

    // True when the value is (a transform of) the distinguished psi.
    bool is_psi_family(CharId id) const
    {
        const CharValue& v = values_[id.value];
        if (v.norm_power != Rational(0) || v.atoms.size() != 1 || v.atoms.begin()->second != 1)
            return false;
        return bases_[v.atoms.begin()->first.base].psi_distinguished;
    }

    InfinityType infinity_type(CharId id) const
    {
        const CharValue& v = values_[id.value];
        const int n = (*fields_)[v.field].degree();
        InfinityType out = trivial_infinity_type(v.field, n);
        for (const auto& [atom, mult] : v.atoms) {
            const BaseCharacter& b = bases_[atom.base];
            for (int i = 1; i <= n; ++i) {
                EmbeddingRef down = fields_->restrict_embedding(v.field, EmbeddingRef{i, false}, b.field);
                auto [a, bb] = b.inftype.exps[static_cast<std::size_t>(down.index - 1)];
                if (atom.check) {
                    auto na = -bb, nb = -a;
                    a = na;
                    bb = nb;
                }
                if (atom.conj)
                    std::swap(a, bb);
                out.exps[static_cast<std::size_t>(i - 1)].first += Rational(mult) * a;
                out.exps[static_cast<std::size_t>(i - 1)].second += Rational(mult) * bb;
            }
        }
        for (auto& [a, b] : out.exps) {
            a += v.norm_power;
            b += v.norm_power;
        }
        return out;
    }

    // Joined rationality field of all atoms, e.g. E(chi)*E(eta).
    CoeffField rationality(CharId id) const
    {
        CoeffField e;
        const CharValue& v = values_[id.value];
        for (const auto& [atom, mult] : v.atoms) {
            (void)mult;
            e.atoms.insert(bases_[atom.base].rationality_field);
        }
        return e;
    }

    std::string render(CharId id) const
    {
        const CharValue& v = values_[id.value];
        if (v.atoms.empty() && v.norm_power == Rational(0))
            return "1";
        std::string s;
        auto append = [&s](const std::string& part) {
            if (!s.empty())
                s += "*";
            s += part;
        };
        for (const auto& [atom, mult] : v.atoms) {
            std::string part = bases_[atom.base].name;
            if (atom.conj)
                part = "conj " + part;
            if (atom.check)
                part = "check " + part;
            if (atom.conj && atom.check)
                part = "check conj " + bases_[atom.base].name;
            if ((atom.conj || atom.check) && mult != 1)
                part = "(" + part + ")";
            if (mult != 1)
                part += "^" + std::to_string(mult);
            append(part);
        }
        if (v.norm_power != Rational(0))
            append("normpow(" + periodcalc::to_string(v.norm_power) + ")");
        return s;
    }

private:
    CharId intern(CharValue v)
    {
        // Canonical form.  Toggling both transform flags inverts an atom
        // (check = inverse o conj), so each base splits into two orbits
        // {plain, check*conj} and {check, conj} of mutually inverse atoms.
        // Net the multiplicity per orbit and store it with positive sign;
        // structural equality is then equality of characters.
        std::map<CharAtom, long long> net;
        for (const auto& [atom, mult] : v.atoms) {
            CharAtom rep = atom;
            int sign = 1;
            if (rep.conj) {
                rep.check = !rep.check;
                rep.conj = false;
                sign = -1;
            }
            net[rep] += sign * static_cast<long long>(mult);
        }
        std::map<CharAtom, int> canonical;
        for (const auto& [rep, m] : net) {
            if (m == 0)
                continue;
            if (m > 0) {
                canonical[rep] = static_cast<int>(m);
            } else {
                CharAtom flipped = rep;
                flipped.check = !flipped.check;
                flipped.conj = true;
                canonical[flipped] = static_cast<int>(-m);
            }
        }
        v.atoms = std::move(canonical);
        auto found = interned_.find(v);
        if (found != interned_.end())
            return found->second;
        values_.push_back(v);
        CharId id{static_cast<std::uint32_t>(values_.size() - 1)};
        interned_[v] = id;
        return id;
    }

    const FieldRegistry* fields_;
    std::vector<BaseCharacter> bases_;
    std::vector<CharValue> values_;
    std::map<CharValue, CharId> interned_;
    std::map<std::string, CharId> by_name_;
};

} // namespace periodcalc
