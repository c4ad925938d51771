#include <periodcalc/hodge.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace periodcalc;

namespace {

HodgeType weight_pairs(std::vector<std::pair<long long, long long>> pq)
{
    std::vector<std::pair<Rational, Rational>> rp;
    for (auto [p, q] : pq)
        rp.emplace_back(Rational(p), Rational(q));
    return make_hodge(std::move(rp));
}

InfinityType char_type(std::vector<std::pair<long long, long long>> exps)
{
    std::vector<std::pair<Rational, Rational>> rs;
    for (auto [a, b] : exps)
        rs.emplace_back(Rational(a), Rational(b));
    return make_infinity_type(FieldId{1}, std::move(rs));
}

// Random swap-closed Hodge type with no (p,p) pair; rank <= 2*max_orbits.
HodgeType random_hodge(std::mt19937& rng, int max_orbits = 3, long long span = 20)
{
    for (;;) {
        long long w = static_cast<long long>(rng() % static_cast<unsigned long>(2 * span + 1)) - span;
        int orbits = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_orbits));
        std::set<long long> ps;
        for (int i = 0; i < orbits; ++i) {
            long long p = static_cast<long long>(rng() % static_cast<unsigned long>(2 * span + 1)) - span;
            if (2 * p == w)
                continue;
            if (w - p < -span || w - p > span)
                continue;
            ps.insert(p);
            ps.insert(w - p);
        }
        if (ps.empty())
            continue;
        std::vector<std::pair<Rational, Rational>> pairs;
        for (auto p : ps)
            pairs.emplace_back(Rational(p), Rational(w - p));
        return make_hodge(std::move(pairs));
    }
}

} // namespace

TEST_CASE("hodge constructor validates purity and swap closure")
{
    CHECK_THROWS_AS(weight_pairs({{0, 3}, {1, 1}}), Error);          // not pure
    CHECK_THROWS_AS(weight_pairs({{0, 3}, {1, 2}}), Error);          // not swap closed
    CHECK_NOTHROW(weight_pairs({{0, 3}, {3, 0}, {1, 2}, {2, 1}}));
}

TEST_CASE("deligne oracle on frozen examples")
{
    auto h = weight_pairs({{0, 3}, {3, 0}});
    CHECK(deligne_oracle(h, Rational(1)));
    CHECK_FALSE(deligne_oracle(h, Rational(0)));

    auto h2 = weight_pairs({{-2, 2}, {2, -2}});
    CHECK_FALSE(deligne_oracle(h2, Rational(3)));
    CHECK(deligne_oracle(h2, Rational(-1)));
    CHECK(deligne_oracle(h2, Rational(2)));

    auto degenerate = weight_pairs({{1, 1}});
    CHECK_THROWS_AS(deligne_oracle(degenerate, Rational(0)), Error);
}

TEST_CASE("closed-form critical range matches frozen values")
{
    CHECK(critical_range_closed(weight_pairs({{0, 3}, {3, 0}})) == CriticalRange{Rational(1), Rational(3)});
    CHECK(critical_range_closed(weight_pairs({{-2, 2}, {2, -2}})) == CriticalRange{Rational(-1), Rational(2)});
    CHECK_THROWS_AS(critical_range_closed(weight_pairs({{1, 1}})), Error);
}

TEST_CASE("closed form equals the oracle scan on random types")
{
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 2000; ++trial) {
        HodgeType h = random_hodge(rng);
        CriticalRange closed = critical_range_closed(h);
        CriticalRange scanned = oracle_range_scan(h);
        INFO("weight " << to_string(h.weight));
        CHECK(closed == scanned);
        CHECK_FALSE(closed.empty()); // the interval is never empty under the preconditions
    }
}

TEST_CASE("hodge of a representation")
{
    // n=3, a=(2,0,-2), b=-a: pairs (-1,3),(1,1),(3,-1); weight 2
    InfinityType pi = char_type({{2, -2}, {0, 0}, {-2, 2}});
    HodgeType h = hodge_of_representation(pi);
    CHECK(h.weight == Rational(2));
    CHECK(h.rank() == 6);
    CHECK(std::count(h.pairs.begin(), h.pairs.end(), std::make_pair(Rational(1), Rational(1))) == 2);
    CHECK(std::count(h.pairs.begin(), h.pairs.end(), std::make_pair(Rational(-1), Rational(3))) == 2);

    // n=1: {(-2,2),(2,-2)}, weight 0
    InfinityType one = char_type({{2, -2}});
    HodgeType h1 = hodge_of_representation(one);
    CHECK(h1.weight == Rational(0));
    CHECK(h1.rank() == 2);

    // conjugate self-dual => weight n-1
    InfinityType pi5 = make_infinity_type(FieldId{1}, {{Rational(3, 2), Rational(-3, 2)},
                                                       {Rational(1, 2), Rational(-1, 2)},
                                                       {Rational(-1, 2), Rational(1, 2)},
                                                       {Rational(-3, 2), Rational(3, 2)}});
    CHECK(hodge_of_representation(pi5).weight == Rational(3));

    // non-algebraic input rejected
    InfinityType bad = make_infinity_type(FieldId{1}, {{Rational(1, 2), Rational(0)},
                                                       {Rational(0), Rational(1, 2)}});
    CHECK_THROWS_AS(hodge_of_representation(bad), Error);
}

TEST_CASE("tensor of hodge types")
{
    auto h1 = weight_pairs({{0, 3}, {3, 0}});
    auto point = weight_pairs({{0, 0}});
    CHECK(tensor_hodge(h1, point).pairs == h1.pairs);

    auto h2 = weight_pairs({{0, 1}, {1, 0}});
    auto t = tensor_hodge(h1, h2);
    CHECK(t.weight == Rational(4));
    CHECK(t.rank() == 4);
    CHECK(std::count(t.pairs.begin(), t.pairs.end(), std::make_pair(Rational(0), Rational(4))) == 1);
    CHECK(std::count(t.pairs.begin(), t.pairs.end(), std::make_pair(Rational(1), Rational(3))) == 1);
}

TEST_CASE("character critical range: frozen examples and oracle agreement")
{
    // n=1, a=2, w=0 -> [-1, 2]
    CHECK(critical_range_character(char_type({{2, -2}})) == CriticalRange{Rational(-1), Rational(2)});
    // n=2, a=(1,-2), w=0 -> [0, 1]
    CHECK(critical_range_character(char_type({{1, -1}, {-2, 2}})) == CriticalRange{Rational(0), Rational(1)});
    // non-critical input rejected
    CHECK_THROWS_AS(critical_range_character(char_type({{1, 1}})), Error);

    std::mt19937 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        int n = 1 + static_cast<int>(rng() % 5);
        long long w = static_cast<long long>(rng() % 9) - 4;
        std::vector<std::pair<long long, long long>> exps;
        for (int i = 0; i < n; ++i) {
            long long a = static_cast<long long>(rng() % 17) - 8;
            if (2 * a == -w)
                ++a;
            exps.emplace_back(a, -w - a);
        }
        auto chi = char_type(exps);
        CHECK(critical_range_character(chi) == oracle_range_scan(hodge_of_character(chi)));
    }
}

TEST_CASE("pair critical range: frozen example and oracle agreement")
{
    // n=3, c=(2,0,-2), eta=(0,1): range in the shifted variable is [0,0]
    InfinityType pi = char_type({{2, -2}, {0, 0}, {-2, 2}});
    InfinityType eta = char_type({{0, 1}});
    CriticalRange r = critical_range_pair(pi, eta);
    CHECK(r == CriticalRange{Rational(0), Rational(0)});

    // guard: a-b+2c_i = 0
    InfinityType eta0 = char_type({{0, 0}});
    CHECK_THROWS_AS(critical_range_pair(pi, eta0), Error);

    std::mt19937 rng(4242);
    int checked = 0;
    while (checked < 500) {
        int n = 1 + static_cast<int>(rng() % 4);
        std::set<long long> cset;
        while (static_cast<int>(cset.size()) < n)
            cset.insert(static_cast<long long>(rng() % 21) - 10);
        std::vector<Rational> cs(cset.begin(), cset.end());
        std::sort(cs.begin(), cs.end(), std::greater<Rational>());
        InfinityType rep;
        rep.field = FieldId{1};
        for (auto& c : cs) {
            Rational ci = (n % 2 == 0) ? c + Rational(1, 2) : c; // c_i in Z + (n-1)/2
            rep.exps.emplace_back(ci, -ci);
        }
        long long a = static_cast<long long>(rng() % 9) - 4;
        long long b = static_cast<long long>(rng() % 9) - 4;
        InfinityType etar = char_type({{a, b}});
        bool degenerate = false;
        for (const auto& [c, d] : rep.exps) {
            (void)d;
            if (Rational(a - b) + 2 * c == Rational(0))
                degenerate = true;
        }
        if (degenerate)
            continue;
        CriticalRange shifted = critical_range_pair(rep, etar);
        HodgeType pair_motive = hodge_of_pair(rep, etar);
        CriticalRange absolute = oracle_range_scan(pair_motive);
        Rational shift = Rational(n - 1, 2);
        if (absolute.empty()) {
            CHECK(shifted.empty());
        } else {
            CHECK(shifted.lo + shift == absolute.lo);
            CHECK(shifted.hi + shift == absolute.hi);
        }

        // For a +/- symmetric exponent set the full Q-tensor of the
        // restrictions has the same critical range as the pair motive.
        bool symmetric = true;
        for (const auto& [c, d] : rep.exps) {
            (void)d;
            bool found = false;
            for (const auto& [c2, d2] : rep.exps) {
                (void)d2;
                if (c2 == -c)
                    found = true;
            }
            symmetric = symmetric && found;
        }
        if (symmetric && a != b) {
            HodgeType full = tensor_hodge(hodge_of_representation(rep), hodge_of_character(etar));
            CHECK(oracle_range_scan(full) == absolute);
        }
        ++checked;
    }
}
