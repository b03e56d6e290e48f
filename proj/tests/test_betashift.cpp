#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "dimspec/betashift.hpp"
#include "dimspec/errors.hpp"
#include "dimspec/shift.hpp"

using namespace dimspec;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

// Independent window-sum oracle, written from the definition: every window
// sum must stay strictly below 1.
bool window_oracle(const Word& w, double beta) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        double sum = 0.0, pw = 1.0;
        for (std::size_t s = i; s < w.size(); ++s) {
            pw /= beta;
            sum += w.letters[s] * pw;
            if (sum >= 1.0 - 1e-12) return false;
        }
    }
    return true;
}

// Random admissible word of X_beta of the given length (uniform letter
// proposals with rejection).
Word random_admissible(std::mt19937& rng, double beta, int length) {
    const ShiftSpec spec = ShiftSpec::beta(beta);
    const int alphabet = spec.alphabet_size();
    std::uniform_int_distribution<int> pick(0, alphabet - 1);
    Word w;
    while (static_cast<int>(w.size()) < length) {
        std::vector<int> tries;
        for (int a = 0; a < alphabet; ++a) tries.push_back(a);
        std::shuffle(tries.begin(), tries.end(), rng);
        bool extended = false;
        for (int a : tries) {
            w.letters.push_back(a);
            if (is_word_admissible(spec, w)) {
                extended = true;
                break;
            }
            w.letters.pop_back();
        }
        if (!extended) {
            w.letters.push_back(0);  // zero extension always works
        }
        (void)pick;
    }
    return w;
}

}  // namespace

TEST_CASE("greedy expansions follow the strict-inequality recursion") {
    CHECK(greedy_expansion(0.0, 1.7, 5).str() == "00000");
    CHECK(greedy_expansion(0.5, 2.0, 4).str() == "0111");
    CHECK(greedy_expansion(1.0 / kPhi, kPhi, 4).str() == "0101");
    CHECK_THROWS_AS((void)greedy_expansion(1.0, 2.0, 3), InputError);
    CHECK_THROWS_AS((void)greedy_expansion(-0.1, 2.0, 3), InputError);
    CHECK_THROWS_AS((void)greedy_expansion(0.5, 1.0, 3), InputError);
}

TEST_CASE("greedy expansions are admissible for their own beta") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    std::uniform_real_distribution<double> bdist(1.05, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double beta = bdist(rng);
        const double t = tdist(rng) * 0.999;
        const Word w = greedy_expansion(t, beta, 12);
        CHECK(is_word_admissible(ShiftSpec::beta(beta), w));
    }
}

TEST_CASE("delta bound values and monotonicity") {
    CHECK(delta_bound(1.5, 1) == doctest::Approx(std::sqrt(3.25) - 1.5).epsilon(1e-12));
    CHECK(delta_bound(2.0, 1) == doctest::Approx(std::sqrt(5.0) - 2.0).epsilon(1e-12));
    for (double beta : {1.1, 1.5, 2.0, 3.0, 4.0})
        for (int k = 1; k < 8; ++k) CHECK(delta_bound(beta, k + 1) < delta_bound(beta, k));
    CHECK_THROWS_AS((void)delta_bound(1.0, 1), InputError);
    CHECK_THROWS_AS((void)delta_bound(2.0, 0), InputError);
}

TEST_CASE("sparse zero replacement on the worked examples") {
    // all zeros: nothing to do
    const auto plan0 = sparse_zero_replacement(Word::parse("00000000"), 1.5, 1.8, 1);
    CHECK(plan0.positions.empty());
    CHECK(plan0.result.str() == "00000000");

    // "11" padded to length 8: only position 2 gets zeroed
    const auto plan1 = sparse_zero_replacement(Word::parse("11000000"), 1.5, 1.8, 1);
    CHECK(plan1.positions == std::vector<int>{2});
    CHECK(plan1.result.str() == "10000000");
    CHECK(window_oracle(plan1.result, 1.5));

    // alternating word: every run interval is a single letter
    const auto plan2 = sparse_zero_replacement(Word::parse("10101010"), 1.5, 1.8, 1);
    CHECK(plan2.positions == std::vector<int>{1, 3, 5, 7});
    CHECK(plan2.result.str() == "00000000");
}

TEST_CASE("replacement preconditions are enforced") {
    // beta_prime too large for k
    CHECK_THROWS_AS((void)sparse_zero_replacement(Word::parse("10"), 1.5, 1.9, 1), PreconditionError);
    // word not admissible for the declared beta_prime
    CHECK_THROWS_AS((void)sparse_zero_replacement(Word::parse("11"), 1.5, 1.2, 1), PreconditionError);
    CHECK_THROWS_AS((void)sparse_zero_replacement(Word::parse("10"), 0.9, 1.0, 1), InputError);
}

TEST_CASE("replace_word maps languages and fixes zero words") {
    CHECK(replace_word(Word::parse("0000"), 1.5, 1.8, 1).str() == "0000");
    CHECK(replace_word(Word::parse("11"), 1.5, 1.8, 1).str() == "10");
}

TEST_CASE("replacement plans satisfy the construction invariants") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> bdist(1.05, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> kdist(1, 3);
    std::uniform_int_distribution<int> ldist(1, 24);

    for (int trial = 0; trial < 500; ++trial) {
        const double beta = bdist(rng);
        const int k = kdist(rng);
        const double delta = 0.98 * delta_bound(beta, k) * unit(rng);
        const double beta_prime = beta + delta;
        const Word y = random_admissible(rng, beta_prime, ldist(rng));

        const ReplacementPlan plan = sparse_zero_replacement(y, beta, beta_prime, k);

        // gaps > k, sorted
        for (std::size_t i = 0; i + 1 < plan.positions.size(); ++i)
            CHECK(plan.positions[i + 1] - plan.positions[i] > k);
        // nonzero source letters at every chosen position
        for (int p : plan.positions) CHECK(plan.source.at(static_cast<std::size_t>(p)) > 0);
        // coordinatewise dominance
        REQUIRE(plan.result.size() == plan.source.size());
        for (std::size_t i = 0; i < plan.result.size(); ++i)
            CHECK(plan.result.letters[i] <= plan.source.letters[i]);
        // the independent oracle accepts the result
        CHECK(window_oracle(plan.result, beta));
    }
}

TEST_CASE("replacement window chain stays below the proof bound") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> bdist(1.1, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double beta = bdist(rng);
        const int k = 1 + (trial % 3);
        const double delta = 0.9 * delta_bound(beta, k);
        const double beta_prime = beta + delta;
        const Word y = random_admissible(rng, beta_prime, 20);
        const ReplacementPlan plan = sparse_zero_replacement(y, beta, beta_prime, k);
        const Word& x = plan.result;
        const double bound =
            std::pow((beta + delta) / beta, 2.0 * k) - std::pow(beta, -2.0 * k);
        for (std::size_t i = 0; i + 1 <= x.size(); ++i) {
            if (i + 1 > x.size() || x.letters[i] == 0) continue;
            if (x.size() - i < 2 * static_cast<std::size_t>(k)) continue;
            double sum = 0.0, pw = 1.0;
            for (std::size_t s = i; s < std::min(x.size(), i + 2 * static_cast<std::size_t>(k)); ++s) {
                pw /= beta;
                sum += x.letters[s] * pw;
            }
            CHECK(sum < bound + 1e-12);
        }
    }
}

TEST_CASE("fiber sizes of the word map respect the counting bound") {
    const double beta = 1.5;
    const int k = 2;
    const double beta_prime = beta + 0.9 * delta_bound(beta, k);
    for (int n : {4, 6, 8}) {
        std::map<Word, int> fibers;
        for (const Word& v : language(ShiftSpec::beta(beta_prime), n))
            fibers[replace_word(v, beta, beta_prime, k)]++;
        int max_fiber = 0;
        for (const auto& [image, count] : fibers) {
            CHECK(is_word_admissible(ShiftSpec::beta(beta), image));
            max_fiber = std::max(max_fiber, count);
        }
        // j^{n/k} (2n/k) C(n, n/k) with j = 1
        double bound = 2.0 * n / k;
        double binom = 1.0;
        for (int i = 0; i < n / k; ++i) binom = binom * (n - i) / (i + 1);
        bound *= binom;
        CHECK(max_fiber <= bound);
    }
}

TEST_CASE("inner SFT margins and degeneracy at small windows") {
    const InnerSftSpec tiny = inner_sft(kPhi, 2);
    CHECK(tiny.margin == doctest::Approx(1.0 / kPhi).epsilon(1e-12));
    REQUIRE(tiny.vertices.size() == 2);
    // only the all-zero window survives: a single self-loop on vertex "0"
    REQUIRE(tiny.transitions.size() == 1);
    CHECK(tiny.vertices[static_cast<std::size_t>(tiny.transitions[0].first)].str() == "0");
    CHECK(tiny.transitions[0].first == tiny.transitions[0].second);
}

TEST_CASE("inner SFT paths spell admissible words") {
    const InnerSftSpec sft = inner_sft(kPhi, 8);
    const ShiftSpec vertex = sft.vertex_shift();
    const ShiftSpec phi = ShiftSpec::beta(kPhi);
    // spell every path of up to 9 vertices (words of length <= 16)
    for (int states = 1; states <= 9; ++states) {
        for (const Word& path : language(vertex, states)) {
            Word spelled = sft.vertices[static_cast<std::size_t>(path.letters.front())];
            for (std::size_t i = 1; i < path.size(); ++i)
                spelled.letters.push_back(
                    sft.vertices[static_cast<std::size_t>(path.letters[i])].letters.back());
            CHECK(is_word_admissible(phi, spelled));
        }
    }
}

TEST_CASE("inner SFT spelled-word count grows with the window") {
    for (double beta : {1.3, kPhi, 1.9}) {
        std::size_t previous = 0;
        for (int m : {4, 6, 8, 10}) {
            const InnerSftSpec sft = inner_sft(beta, m);
            const int states = 10 - m + 2;
            std::set<Word> spelled;
            if (states >= 1) {
                for (const Word& path : language(sft.vertex_shift(), states)) {
                    Word w = sft.vertices[static_cast<std::size_t>(path.letters.front())];
                    for (std::size_t i = 1; i < path.size(); ++i)
                        w.letters.push_back(
                            sft.vertices[static_cast<std::size_t>(path.letters[i])].letters.back());
                    spelled.insert(w);
                }
            }
            CHECK(spelled.size() >= previous);
            previous = spelled.size();
        }
    }
}

TEST_CASE("inner SFT validates its inputs") {
    CHECK_THROWS_AS((void)inner_sft(1.0, 4), InputError);
    CHECK_THROWS_AS((void)inner_sft(1.5, 1), InputError);
}
