#pragma once

#include "induction.hpp"

#include <map>
#include <optional>
#include <string>

namespace periodcalc {

// A Gauss-sum symbol: optionally linked to the character of K it arises
// from (which enables the rewrite toward a CM period) and optionally
// carrying the coefficient field into which it is a unit.
struct GaussSymbolInfo {
    std::string name;
    bool trivial = false;                  // conductor 1; Gauss sum is 1
    std::optional<CharId> attached_pullback; // the character alpha_0 o N over K
    std::string absorb_atom;               // e.g. "K" for eps_K; empty = never absorbed
};

// One self-contained working context: fields, characters, coefficient-field
// lattice, Gauss symbols and induced representations.  Everything is
// append-only; values handed out are immutable.
class Session {
public:
    Session() : chars_(&fields_)
    {
        lattice_.declare("K");
        GaussSymbolInfo eps;
        eps.name = "eps_K";
        eps.absorb_atom = "K"; // the Artin character of K/Q has Gauss sum in K^x
        gauss_[eps.name] = eps;
    }

    FieldRegistry& fields() { return fields_; }
    const FieldRegistry& fields() const { return fields_; }
    CharacterRegistry& chars() { return chars_; }
    const CharacterRegistry& chars() const { return chars_; }
    FieldLattice& lattice() { return lattice_; }
    const FieldLattice& lattice() const { return lattice_; }

    CharId declare_character(BaseCharacter base)
    {
        CharId id = chars_.declare_base(base);
        lattice_.declare(chars_.base(chars_.value(id).atoms.begin()->first.base).rationality_field);
        return id;
    }

    // The distinguished psi of K: infinity type z^1, psi*psi^c = ||.||.
    CharId declare_psi(const std::string& name)
    {
        BaseCharacter psi;
        psi.name = name;
        psi.field = FieldRegistry::base_k();
        psi.inftype = make_infinity_type(psi.field, {{Rational(1), Rational(0)}});
        psi.psi_distinguished = true;
        CharId id = declare_character(psi);
        psi_ = id;
        return id;
    }

    std::optional<CharId> psi() const { return psi_; }

    void declare_gauss(GaussSymbolInfo info)
    {
        require(gauss_.find(info.name) == gauss_.end(), "duplicate Gauss symbol: " + info.name);
        gauss_[info.name] = std::move(info);
    }

    const GaussSymbolInfo* gauss_info(const std::string& name) const
    {
        auto it = gauss_.find(name);
        return it == gauss_.end() ? nullptr : &it->second;
    }

    RepSpec& declare_rep(const std::string& name, CharId chi)
    {
        require(reps_.find(name) == reps_.end(), "duplicate representation name: " + name);
        RepSpec rep = induce(fields_, chars_, chi, psi_, name);
        return reps_[name] = rep;
    }

    const RepSpec* rep(const std::string& name) const
    {
        auto it = reps_.find(name);
        return it == reps_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, RepSpec>& reps() const { return reps_; }

private:
    FieldRegistry fields_;
    CharacterRegistry chars_;
    FieldLattice lattice_;
    std::map<std::string, GaussSymbolInfo> gauss_;
    std::map<std::string, RepSpec> reps_;
    std::optional<CharId> psi_;
};

} // namespace periodcalc
