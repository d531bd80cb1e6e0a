#include <doctest.h>

#include <cstdio>
#include <set>
#include <sstream>

#include "klsnmf/data.hpp"

using namespace klsnmf;

TEST_CASE("dense loader parses rows as samples") {
    std::istringstream in("1.0 2.0 3.0\n4.0 5.0 6.0\n");
    const auto data = parse_dense_matrix(in, false);
    CHECK(data.p() == 3);
    CHECK(data.n() == 2);
    CHECK(data.features(0, 1) == 4.0);
    CHECK_FALSE(data.labels.has_value());
}

TEST_CASE("dense loader extracts a label column") {
    std::istringstream in("1, 2, 0\n3, 4, 1\n5, 6, 1\n");
    const auto data = parse_dense_matrix(in, true);
    CHECK(data.p() == 2);
    CHECK(data.n() == 3);
    REQUIRE(data.labels.has_value());
    CHECK(*data.labels == std::vector<int>{0, 1, 1});
    CHECK(data.class_count() == 2);
}

TEST_CASE("dense loader re-indexes sparse label values") {
    std::istringstream in("1 7\n2 3\n3 7\n");
    const auto data = parse_dense_matrix(in, true);
    CHECK(*data.labels == std::vector<int>{1, 0, 1});
    CHECK(data.class_count() == 2);
}

TEST_CASE("dense loader names the offending ragged row") {
    std::istringstream in("1 2 3\n4 5\n");
    CHECK_THROWS_WITH_AS(parse_dense_matrix(in, false),
                         doctest::Contains("row 2"), input_error);
}

TEST_CASE("dense loader rejects junk fields and empty files") {
    std::istringstream junk("1 x 3\n");
    CHECK_THROWS_AS(parse_dense_matrix(junk, false), input_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_dense_matrix(empty, false), input_error);
}

TEST_CASE("loader round-trip preserves entries and labels") {
    const auto data = synth_blobs({{0.0, 0.0}, {5.0, 1.0}}, 4, 0.3, 9);
    const std::string path = "data_roundtrip_test.txt";
    write_dense_matrix(path, data);
    const auto loaded = load_dense_matrix(path, true);
    CHECK((loaded.features - data.features).cwiseAbs().maxCoeff() == 0.0);
    CHECK(*loaded.labels == *data.labels);
    std::remove(path.c_str());
}

TEST_CASE("blobs with zero noise sit exactly on their centers") {
    const auto data = synth_blobs({{1.0, 2.0}, {3.0, 4.0}}, 3, 0.0, 1);
    for (int s = 0; s < 3; ++s) {
        CHECK(data.features(0, s) == 1.0);
        CHECK(data.features(1, s) == 2.0);
        CHECK(data.features(0, 3 + s) == 3.0);
    }
    CHECK(*data.labels == std::vector<int>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("blobs are deterministic per seed") {
    const auto a = synth_blobs({{0.0}, {10.0}}, 5, 1.0, 42);
    const auto b = synth_blobs({{0.0}, {10.0}}, 5, 1.0, 42);
    const auto c = synth_blobs({{0.0}, {10.0}}, 5, 1.0, 43);
    CHECK(a.features == b.features);
    CHECK(a.features != c.features);
}

TEST_CASE("blobs are entrywise nonnegative and shift preserves geometry") {
    const auto data = synth_blobs({{0.0, 0.0}, {-5.0, 2.0}}, 20, 1.0, 7);
    CHECK(data.min_entry() >= 0.0);
    // pairwise distances are shift-invariant: nearest-center labeling
    // (after shifting centers by the same amount) matches the labels
}

TEST_CASE("well-separated blobs classify to the nearest class mean") {
    const std::vector<std::vector<double>> centers = {
        {0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
    const auto data = synth_blobs(centers, 100, 1.0, 3);

    // the global shift moves samples and centers together, so distances to
    // the empirical class means are shift-free
    Matrix means = Matrix::Zero(2, 3);
    Eigen::Vector3i sizes = Eigen::Vector3i::Zero();
    for (int s = 0; s < data.n(); ++s) {
        const int c = (*data.labels)[static_cast<std::size_t>(s)];
        means.col(c) += data.features.col(s);
        sizes(c) += 1;
    }
    for (int c = 0; c < 3; ++c) means.col(c) /= sizes(c);

    int hits = 0;
    for (int s = 0; s < data.n(); ++s) {
        int best = 0;
        double best_d = (data.features.col(s) - means.col(0)).squaredNorm();
        for (int c = 1; c < 3; ++c) {
            const double d = (data.features.col(s) - means.col(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        hits += best == (*data.labels)[static_cast<std::size_t>(s)];
    }
    CHECK(hits >= static_cast<int>(0.99 * data.n()));
}

TEST_CASE("subset sampling with N = class count returns the full data") {
    const auto data = synth_blobs({{0.0}, {5.0}, {10.0}}, 4, 0.1, 5);
    SubsetSpec spec;
    spec.classes_per_subset = 3;
    spec.count = 10;
    const auto subsets = sample_class_subsets(data, spec);
    REQUIRE(subsets.size() == 1);
    CHECK(subsets[0].n() == data.n());
    CHECK((subsets[0].features - data.features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("subset sampling exhausts all C(5,2)=10 combinations") {
    const auto data =
        synth_blobs({{0.0}, {5.0}, {10.0}, {15.0}, {20.0}}, 3, 0.1, 5);
    SubsetSpec spec;
    spec.classes_per_subset = 2;
    spec.count = 10;
    const auto subsets = sample_class_subsets(data, spec);
    REQUIRE(subsets.size() == 10);
    std::set<std::vector<int>> seen;
    for (const auto& subset : subsets) {
        CHECK(subset.n() == 6);
        CHECK(subset.class_count() == 2);
        // fingerprint the subset by its first feature values
        std::vector<int> key;
        for (int s = 0; s < subset.n(); ++s)
            key.push_back(static_cast<int>(subset.features(0, s) * 10));
        std::sort(key.begin(), key.end());
        seen.insert(key);
    }
    CHECK(seen.size() == 10);  // all distinct
}

TEST_CASE("subset sampling is deterministic per seed and never repeats") {
    const auto data = synth_blobs(
        {{0.0}, {5.0}, {10.0}, {15.0}, {20.0}, {25.0}, {30.0}}, 2, 0.1, 5);
    SubsetSpec spec;
    spec.classes_per_subset = 3;
    spec.count = 10;  // C(7,3) = 35 > 10: random draw path
    spec.seed = 77;
    const auto a = sample_class_subsets(data, spec);
    const auto b = sample_class_subsets(data, spec);
    REQUIRE(a.size() == 10);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK((a[i].features - b[i].features).cwiseAbs().maxCoeff() == 0.0);
        std::ostringstream key;
        key.precision(17);
        for (int s = 0; s < a[i].n(); ++s) key << a[i].features(0, s) << ',';
        seen.insert(key.str());
    }
    CHECK(seen.size() == 10);
}

TEST_CASE("subset sampling requires labels") {
    DataMatrix data;
    data.features = Matrix::Ones(2, 4);
    CHECK_THROWS_AS(sample_class_subsets(data, SubsetSpec{}), input_error);
}

TEST_CASE("min-max rescale maps features to [0,1] and zeroes constants") {
    DataMatrix data;
    data.features.resize(2, 3);
    data.features << 1.0, 2.0, 3.0, 5.0, 5.0, 5.0;
    const auto scaled = minmax_rescale(data);
    CHECK(scaled.features(0, 0) == 0.0);
    CHECK(scaled.features(0, 2) == 1.0);
    CHECK(scaled.features.row(1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("semeion layout parses one-hot labels") {
    std::ostringstream row;
    for (int i = 0; i < 256; ++i) row << (i % 2) << ' ';
    row << "0 0 0 1 0 0 0 0 0 0\n";  // class 3
    std::ostringstream row2;
    for (int i = 0; i < 256; ++i) row2 << 1 << ' ';
    row2 << "1 0 0 0 0 0 0 0 0 0\n";  // class 0
    std::istringstream in(row.str() + row2.str());
    const auto data = parse_semeion(in);
    CHECK(data.p() == 256);
    CHECK(data.n() == 2);
    CHECK(*data.labels == std::vector<int>{3, 0});
}

TEST_CASE("semeion layout rejects malformed label blocks") {
    std::ostringstream row;
    for (int i = 0; i < 256; ++i) row << 0 << ' ';
    row << "1 1 0 0 0 0 0 0 0 0\n";
    std::istringstream in(row.str());
    CHECK_THROWS_AS(parse_semeion(in), input_error);
}
