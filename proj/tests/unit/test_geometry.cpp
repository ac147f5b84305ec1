#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "common/error.hpp"
#include "geometry/crop.hpp"
#include "geometry/metrics.hpp"
#include "geometry/neighbors.hpp"
#include "geometry/sampling.hpp"
#include "support/oracles.hpp"

using namespace rladnet;

namespace {

bool near_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

PointCloud line_x(std::size_t n) {
    std::vector<Point3> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i), 0, 0});
    return PointCloud(pts);
}

}  // namespace

TEST_CASE("point cloud validation") {
    CHECK_THROWS_AS(PointCloud(std::vector<Point3>{}), InvalidArgument);
    CHECK_THROWS_AS(PointCloud({{0, std::nan(""), 0}}), InvalidArgument);
    CHECK_THROWS_AS(PointCloud({{0, 0, std::numeric_limits<double>::infinity()}}), InvalidArgument);
    const PointCloud dup({{1, 2, 3}, {1, 2, 3}});
    CHECK(dup.size() == 2);
    const std::vector<double> flat{1, 2, 3, 4, 5, 6};
    CHECK(PointCloud::from_flat(flat).flatten() == flat);
    CHECK_THROWS_AS(PointCloud::from_flat(std::vector<double>{1, 2}), InvalidArgument);
}

TEST_CASE("chamfer_l2 examples") {
    const PointCloud o({{0, 0, 0}});
    const PointCloud x1({{1, 0, 0}});
    CHECK(chamfer_l2(o, x1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(chamfer_l2(PointCloud({{0, 0, 0}, {2, 0, 0}}), x1) == doctest::Approx(2.0).epsilon(1e-15));
    std::mt19937_64 rng(1);
    const auto a = oracle::random_cloud(rng, 50);
    CHECK(chamfer_l2(a, a) == 0.0);
}

TEST_CASE("chamfer_l2 properties against the brute-force oracle") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 40; ++t) {
        std::uniform_int_distribution<std::size_t> n(1, 256);
        const auto a = t % 3 == 0 ? oracle::lattice_cloud(rng, n(rng)) : oracle::random_cloud(rng, n(rng));
        const auto b = oracle::random_cloud(rng, n(rng), 1.5);
        const double ref = oracle::chamfer(a, b);
        for (auto be : {NeighborBackend::BruteForce, NeighborBackend::Grid, NeighborBackend::Auto})
            CHECK(near_rel(chamfer_l2(a, b, be), ref, 1e-12));
        CHECK(chamfer_l2(a, b) == doctest::Approx(chamfer_l2(b, a)).epsilon(1e-12));
        CHECK(near_rel(chamfer_l2(oracle::permuted(a, rng), oracle::permuted(b, rng)), ref, 1e-12));
    }
}

TEST_CASE("nearest neighbour backends agree, ties to the lowest index") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const auto ref = oracle::lattice_cloud(rng, 300);
        const auto q = oracle::lattice_cloud(rng, 100);
        const auto brute = nearest_neighbors(q, ref, NeighborBackend::BruteForce);
        const auto grid = nearest_neighbors(q, ref, NeighborBackend::Grid);
        for (std::size_t i = 0; i < q.size(); ++i) {
            std::size_t expect = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < ref.size(); ++j) {
                const double d = oracle::d2(q[i], ref[j]);
                if (d < best) {
                    best = d;
                    expect = j;
                }
            }
            CHECK(brute[i].index == expect);
            CHECK(grid[i].index == expect);
            CHECK(grid[i].squared_distance == best);
        }
    }
    // Large far-away query exercises the grid's outer shells.
    const auto ref = oracle::random_cloud(rng, 2000);
    NearestNeighborIndex idx(ref, NeighborBackend::Grid);
    const Point3 far{40, -30, 25};
    CHECK(idx.nearest(far).squared_distance == oracle::nearest_d2(far, ref));
}

TEST_CASE("fscore examples and errors") {
    std::mt19937_64 rng(4);
    const auto gt = oracle::random_cloud(rng, 100);
    const auto same = fscore(gt, gt, 0.01);
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.fscore == 1.0);
    CHECK(same.cd_l2 == 0.0);

    const double diag = bounding_box(gt).diagonal();
    std::vector<Point3> shifted;
    for (const auto& p : gt) shifted.push_back({p[0] + 10 * diag, p[1], p[2]});
    const auto far = fscore(PointCloud(shifted), gt, 0.01);
    CHECK(far.fscore == 0.0);
    CHECK(far.precision == 0.0);
    CHECK(far.recall == 0.0);

    CHECK_THROWS_AS(fscore(gt, PointCloud({{1, 1, 1}, {1, 1, 1}}), 0.01), DegenerateGeometry);
    CHECK_THROWS_AS(fscore(gt, gt, 0.0), InvalidArgument);
    CHECK_THROWS_AS(fscore(gt, gt, -1.0), InvalidArgument);
}

TEST_CASE("fscore matches the oracle and is monotone in tau") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        std::uniform_int_distribution<std::size_t> n(2, 256);
        const auto gt = oracle::random_cloud(rng, n(rng));
        const auto pred = oracle::random_cloud(rng, n(rng));
        double last = -1.0;
        for (double frac : {0.01, 0.05, 0.1, 0.2, 0.5}) {
            const auto r = fscore(pred, gt, frac);
            const auto o = oracle::fscore(pred, gt, frac);
            CHECK(r.precision == o.precision);
            CHECK(r.recall == o.recall);
            CHECK(near_rel(r.tau, o.tau, 1e-12));
            CHECK(std::abs(r.fscore - o.fscore) <= 1e-12);
            CHECK(std::abs(r.fscore - harmonic_fscore(r.precision, r.recall)) <= 1e-12);
            CHECK(r.fscore >= last);
            last = r.fscore;
        }
    }
    CHECK(harmonic_fscore(0.0, 0.0) == 0.0);
}

TEST_CASE("removal counts use floor") {
    CHECK(removal_count(0.25, 2048) == 512);
    CHECK(removal_count(0.5, 2048) == 1024);
    CHECK(removal_count(0.4, 2048) == 819);
    CHECK(removal_count(0.4, 10) == 4);
    CHECK(removal_count(0.29, 100) == 29);
}

TEST_CASE("spherical crop") {
    std::mt19937_64 rng(6);
    const auto src = normalize_unit_sphere(oracle::random_cloud(rng, 2048)).cloud;
    const auto r25 = crop_spherical(src, 0.25, 11);
    const auto r50 = crop_spherical(src, 0.50, 11);
    CHECK(r25.partial.size() == 1536);
    CHECK(r50.partial.size() == 1024);
    CHECK(r25.removed_indices == crop_spherical(src, 0.25, 11).removed_indices);
    CHECK(r25.removed_indices != crop_spherical(src, 0.25, 12).removed_indices);
    CHECK(std::abs(std::sqrt(oracle::d2(r25.anchor, {0, 0, 0})) - 1.0) < 1e-12);

    // Removed points are exactly the floor(ratio N) nearest to the anchor.
    std::set<std::size_t> removed(r25.removed_indices.begin(), r25.removed_indices.end());
    double max_removed = 0.0, min_kept = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double d = oracle::d2(src[i], r25.anchor);
        if (removed.count(i)) max_removed = std::max(max_removed, d);
        else min_kept = std::min(min_kept, d);
    }
    CHECK(max_removed <= min_kept);

    CHECK_THROWS_AS(crop_spherical(src, 0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(crop_spherical(src, 1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(crop_spherical(PointCloud({{0, 0, 0}}), 0.5, 1), InvalidArgument);
}

TEST_CASE("seed-proximity crop") {
    std::mt19937_64 rng(7);
    const auto src = oracle::random_cloud(rng, 2048);
    const auto r = crop_seed_proximity(src, 0.40, 5);
    CHECK(r.partial.size() == 1229);
    CHECK(crop_seed_proximity(line_x(10), 0.40, 1).partial.size() == 6);

    std::set<std::size_t> removed(r.removed_indices.begin(), r.removed_indices.end());
    bool seed_removed = false;
    double max_removed = 0.0, min_kept = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double d = oracle::d2(src[i], r.anchor);
        if (removed.count(i)) {
            max_removed = std::max(max_removed, d);
            seed_removed |= src[i] == r.anchor;
        } else {
            min_kept = std::min(min_kept, d);
        }
    }
    CHECK(seed_removed);
    CHECK(max_removed <= min_kept);
    CHECK(r.removed_indices == crop_seed_proximity(src, 0.40, 5).removed_indices);
    CHECK_THROWS_AS(crop_seed_proximity(src, 1.5, 1), InvalidArgument);
    CHECK_THROWS_AS(crop_seed_proximity(src, -0.1, 1), InvalidArgument);

    // Duplicates of the seed: the seed itself is still among the removed.
    const PointCloud dups({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {1, 1, 1}});
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto c = crop_seed_proximity(dups, 0.2, s);
        REQUIRE(c.removed_indices.size() == 1);
        CHECK(dups[c.removed_indices[0]] == c.anchor);
    }
}

TEST_CASE("crop invariants over random inputs") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        std::uniform_int_distribution<std::size_t> n(2, 400);
        std::uniform_real_distribution<double> ratio(0.01, 0.99);
        const auto src = t % 2 ? oracle::lattice_cloud(rng, n(rng)) : oracle::random_cloud(rng, n(rng));
        const double r = ratio(rng);
        for (auto mode : {CropMode::Spherical, CropMode::SeedProximity}) {
            const auto c = crop(src, mode, r, rng());
            CHECK(c.removed_indices.size() == removal_count(r, src.size()));
            CHECK(c.partial.size() + c.removed_indices.size() == src.size());
            CHECK(std::is_sorted(c.removed_indices.begin(), c.removed_indices.end()));
            CHECK(std::adjacent_find(c.removed_indices.begin(), c.removed_indices.end()) == c.removed_indices.end());
            if (!c.removed_indices.empty()) CHECK(c.removed_indices.back() < src.size());
            // Partial is the source minus the removed indices, order kept.
            std::vector<Point3> kept;
            std::set<std::size_t> removed(c.removed_indices.begin(), c.removed_indices.end());
            for (std::size_t i = 0; i < src.size(); ++i)
                if (!removed.count(i)) kept.push_back(src[i]);
            REQUIRE(kept.size() == c.partial.size());
            CHECK(std::equal(kept.begin(), kept.end(), c.partial.begin()));
        }
    }
}

TEST_CASE("farthest point sampling") {
    std::mt19937_64 rng(9);
    const auto c = oracle::random_cloud(rng, 30);
    CHECK(farthest_point_sample(c, 1, 7) == std::vector<std::size_t>{7});
    CHECK(farthest_point_sample(line_x(10), 2, 0) == std::vector<std::size_t>{0, 9});
    auto all = farthest_point_sample(c, c.size(), 3);
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
    CHECK_THROWS_AS(farthest_point_sample(c, 31, 0), InvalidArgument);
    CHECK_THROWS_AS(farthest_point_sample(c, 0, 0), InvalidArgument);
    CHECK_THROWS_AS(farthest_point_sample(c, 2, 30), InvalidArgument);

    for (int t = 0; t < 40; ++t) {
        std::uniform_int_distribution<std::size_t> n(1, 64);
        const auto src = t % 2 ? oracle::lattice_cloud(rng, n(rng)) : oracle::random_cloud(rng, n(rng));
        std::uniform_int_distribution<std::size_t> m(1, src.size()), s(0, src.size() - 1);
        const auto mm = m(rng), ss = s(rng);
        const auto ours = farthest_point_sample(src, mm, ss);
        const auto ref = oracle::fps(src, mm, ss);
        CHECK(ours == ref);
    }
}

TEST_CASE("k nearest neighbours") {
    std::vector<Point3> grid;
    for (int x = -1; x <= 1; ++x)
        for (int y = -1; y <= 1; ++y)
            for (int z = -1; z <= 1; ++z) grid.push_back({double(x), double(y), double(z)});
    const PointCloud lattice(grid);
    auto got = knn(lattice, {0, 0, 0}, 7);
    CHECK(got.front() == 13);
    std::set<std::size_t> faces(got.begin() + 1, got.end());
    std::set<std::size_t> expect;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (oracle::d2(grid[i], {0, 0, 0}) == 1.0) expect.insert(i);
    CHECK(faces == expect);
    CHECK(got == oracle::knn(lattice, {0, 0, 0}, 7));

    std::mt19937_64 rng(10);
    const auto c = oracle::random_cloud(rng, 40);
    CHECK(knn(c, c[17], 1) == std::vector<std::size_t>{17});
    CHECK(knn(c, {0.1, 0.2, 0.3}, 40) == oracle::knn(c, {0.1, 0.2, 0.3}, 40));
    CHECK_THROWS_AS(knn(c, {0, 0, 0}, 41), InvalidArgument);
    CHECK_THROWS_AS(knn(c, {0, 0, 0}, 0), InvalidArgument);
    for (int t = 0; t < 30; ++t) {
        const auto l = oracle::lattice_cloud(rng, 80);
        const Point3 q{0.25, 0.0, -0.25};
        CHECK(knn(l, q, 20) == oracle::knn(l, q, 20));
    }
}

TEST_CASE("normalize_unit_sphere") {
    const auto n = normalize_unit_sphere(PointCloud({{2, 0, 0}, {4, 0, 0}}));
    CHECK(n.cloud == PointCloud({{-1, 0, 0}, {1, 0, 0}}));
    CHECK(n.centroid == Point3{3, 0, 0});
    CHECK(n.scale == 1.0);

    const auto single = normalize_unit_sphere(PointCloud({{5, -2, 1}}));
    CHECK(single.cloud == PointCloud({{0, 0, 0}}));
    CHECK(single.scale == 1.0);

    const PointCloud centred({{1, 0, 0}, {-1, 0, 0}, {0, 0.5, 0}, {0, -0.5, 0}});
    const auto same = normalize_unit_sphere(centred);
    CHECK(same.cloud == centred);
    CHECK(same.centroid == Point3{0, 0, 0});
    CHECK(same.scale == 1.0);

    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        auto src = oracle::random_cloud(rng, 100, 7.0);
        const auto r = normalize_unit_sphere(src);
        double maxr = 0.0;
        for (const auto& p : r.cloud) maxr = std::max(maxr, std::sqrt(oracle::d2(p, {0, 0, 0})));
        CHECK(maxr <= 1.0 + 1e-12);
        const auto back = denormalize(r.cloud, r.centroid, r.scale);
        for (std::size_t i = 0; i < src.size(); ++i)
            for (int k = 0; k < 3; ++k) CHECK(std::abs(back[i][k] - src[i][k]) <= 1e-9);
        const auto again = apply_normalization(src, r.centroid, r.scale);
        for (std::size_t i = 0; i < src.size(); ++i)
            for (int k = 0; k < 3; ++k) CHECK(std::abs(again[i][k] - r.cloud[i][k]) <= 1e-12);
    }
}
