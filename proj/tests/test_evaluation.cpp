#include <doctest.h>

#include <random>

#include "klsnmf/evaluation.hpp"
#include "fixtures.hpp"

using namespace klsnmf;

namespace {

Partition random_partition(int n, int k, std::mt19937_64& gen) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int& v : labels) v = pick(gen);
    Partition part;
    part.labels = std::move(labels);
    part.k = k;  // allow empty clusters
    return part;
}

Partition relabel(const Partition& part, const std::vector<int>& perm) {
    Partition out = part;
    for (int& v : out.labels) v = perm[static_cast<std::size_t>(v)];
    return out;
}

}  // namespace

TEST_CASE("assign_clusters reads indicator matrices back") {
    Matrix g(4, 2);
    g << 1, 0, 0, 1, 0, 1, 1, 0;
    const auto part = assign_clusters(g);
    CHECK(part.labels == std::vector<int>{0, 1, 1, 0});
    CHECK(part.k == 2);
    CHECK(part.degenerate_rows.empty());
}

TEST_CASE("assign_clusters breaks ties toward the smaller column") {
    Matrix g(1, 2);
    g << 0.2, 0.2;
    CHECK(assign_clusters(g).labels == std::vector<int>{0});
}

TEST_CASE("assign_clusters flags all-zero rows") {
    Matrix g(3, 2);
    g << 0.5, 0.1, 0.0, 0.0, 0.3, 0.6;
    const auto part = assign_clusters(g);
    CHECK(part.labels == std::vector<int>{0, 0, 1});
    CHECK(part.degenerate_rows == std::vector<int>{1});
}

TEST_CASE("assign_clusters rejects negative entries") {
    Matrix g(1, 2);
    g << -0.1, 0.2;
    CHECK_THROWS_AS(assign_clusters(g), input_error);
}

TEST_CASE("accuracy of identical partitions is 1") {
    const auto part = make_partition({0, 1, 2, 0, 1, 2});
    CHECK(accuracy(part, part) == 1.0);
}

TEST_CASE("accuracy is invariant to label swaps") {
    const auto truth = make_partition({0, 0, 1, 1, 2, 2});
    const auto swapped = make_partition({2, 2, 0, 0, 1, 1});
    CHECK(accuracy(truth, swapped) == 1.0);
}

TEST_CASE("accuracy on the fixed crossing example") {
    const auto truth = make_partition({0, 0, 1, 1});
    const auto pred = make_partition({0, 1, 1, 1});
    CHECK(accuracy(truth, pred) == 0.75);
}

TEST_CASE("accuracy rejects length mismatches") {
    CHECK_THROWS_AS(accuracy(make_partition({0, 1}), make_partition({0, 1, 1})),
                    input_error);
}

TEST_CASE("accuracy reports the matched permutation") {
    const auto truth = make_partition({1, 1, 0, 0});
    const auto pred = make_partition({0, 0, 1, 1});
    std::vector<int> matching;
    CHECK(accuracy(truth, pred, &matching) == 1.0);
    CHECK(matching == std::vector<int>{1, 0});
}

TEST_CASE("accuracy pads rectangular confusion matrices") {
    // 3 predicted clusters vs 2 classes: one cluster maps to padding
    const auto truth = make_partition({0, 0, 1, 1});
    const auto pred = make_partition({0, 2, 1, 1});
    std::vector<int> matching;
    CHECK(accuracy(truth, pred, &matching) == 0.75);
    CHECK(matching.size() == 3);
    CHECK(matching[2] == -1);  // padding column
}

TEST_CASE("nmi of identical multi-class partitions is 1") {
    const auto part = make_partition({0, 1, 2, 0, 1, 2});
    CHECK(nmi(part, part) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nmi of independent partitions is 0") {
    CHECK(nmi(make_partition({0, 0, 1, 1}), make_partition({0, 1, 0, 1})) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("nmi matches the frozen entropy oracle") {
    const double value =
        nmi(make_partition({0, 0, 1, 1}), make_partition({0, 1, 1, 1}));
    CHECK(value == doctest::Approx(fixtures::nmi_2x2_value).epsilon(1e-9));
}

TEST_CASE("nmi is symmetric") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_partition(30, 4, gen);
        const auto b = random_partition(30, 3, gen);
        CHECK(nmi(a, b) == nmi(b, a));
    }
}

TEST_CASE("nmi degenerate single-cluster conventions") {
    const auto single = make_partition({0, 0, 0});
    const auto other = make_partition({0, 1, 2});
    CHECK(nmi(single, single) == 1.0);
    CHECK(nmi(single, other) == 0.0);
    CHECK(nmi(other, single) == 0.0);
}

TEST_CASE("purity fixed examples") {
    const auto truth = make_partition({0, 0, 1, 1});
    CHECK(purity(truth, truth) == 1.0);
    // one predicted cluster holding a 2/2 class split
    CHECK(purity(truth, make_partition({0, 0, 0, 0})) == 0.5);
    CHECK(purity(truth, make_partition({0, 1, 1, 1})) == 0.75);
}

TEST_CASE("purity is 1 iff every predicted cluster is pure") {
    const auto truth = make_partition({0, 0, 1, 1, 2});
    const auto pure_split = make_partition({0, 0, 1, 1, 2});
    const auto oversplit = make_partition({0, 1, 2, 2, 3});
    CHECK(purity(truth, pure_split) == 1.0);
    CHECK(purity(truth, oversplit) == 1.0);  // overspliting keeps purity 1
    const auto merged = make_partition({0, 0, 0, 0, 1});
    CHECK(purity(truth, merged) < 1.0);
}

TEST_CASE("matching oracle equals accuracy on single-class truth") {
    const auto truth = make_partition({0, 0, 0, 0});
    const auto pred = make_partition({0, 1, 1, 2});
    CHECK(matching_oracle(truth, pred) == accuracy(truth, pred));
    CHECK(matching_oracle(truth, truth) == 1.0);
}

TEST_CASE("matching oracle rejects more than 6 clusters") {
    std::vector<int> labels(14);
    for (int i = 0; i < 14; ++i) labels[static_cast<std::size_t>(i)] = i % 7;
    const auto part = make_partition(labels);
    CHECK_THROWS_AS(matching_oracle(part, part), parameter_error);
}

TEST_CASE("hungarian accuracy equals the exhaustive oracle") {
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> ksize(1, 6);
    std::uniform_int_distribution<int> nsize(4, 40);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = nsize(gen);
        const auto truth = random_partition(n, ksize(gen), gen);
        const auto pred = random_partition(n, ksize(gen), gen);
        CHECK(accuracy(truth, pred) == matching_oracle(truth, pred));
    }
}

TEST_CASE("metrics are invariant under relabeling either side") {
    std::mt19937_64 gen(123);
    for (int trial = 0; trial < 20; ++trial) {
        const auto truth = random_partition(25, 4, gen);
        const auto pred = random_partition(25, 4, gen);
        std::vector<int> perm = {2, 0, 3, 1};
        const auto truth_r = relabel(truth, perm);
        const auto pred_r = relabel(pred, perm);
        CHECK(accuracy(truth, pred) == accuracy(truth_r, pred));
        CHECK(accuracy(truth, pred) == accuracy(truth, pred_r));
        CHECK(nmi(truth, pred) == doctest::Approx(nmi(truth_r, pred)).epsilon(1e-12));
        CHECK(purity(truth, pred) == purity(truth, pred_r));
    }
}

TEST_CASE("evaluate bundles the three metrics") {
    const auto truth = make_partition({0, 0, 1, 1});
    const auto pred = make_partition({0, 1, 1, 1});
    const auto report = evaluate(truth, pred);
    CHECK(report.accuracy == 0.75);
    CHECK(report.purity == 0.75);
    CHECK(report.nmi == doctest::Approx(fixtures::nmi_2x2_value).epsilon(1e-9));
    CHECK(report.matched_permutation.size() == 2);
}
