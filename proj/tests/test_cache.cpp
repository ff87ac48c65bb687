#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qfc/block_catalog.hpp"
#include "qfc/errors.hpp"

using namespace qfc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("qfc_cache_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("catalog round-trips bit-exactly") {
    TempDir tmp;
    auto q = QuadraticForm::construct(Matrix::Identity(5, 5));
    auto cat = enumerate_block(q, 3.0, Ball::Euclidean);
    const std::string path = (tmp.path / "cat.qfcb").string();
    save_catalog(cat, path);
    auto back = load_catalog(path);
    REQUIRE(back.count() == cat.count());
    CHECK(back.T == cat.T);
    CHECK(back.d == cat.d);
    CHECK(back.ball == cat.ball);
    for (std::size_t i = 0; i < cat.records.size(); ++i) {
        CHECK(std::memcmp(&back.records[i], &cat.records[i], sizeof(BlockRecord)) == 0);
    }
}

TEST_CASE("truncated file rejected") {
    TempDir tmp;
    auto q = QuadraticForm::construct(Matrix::Identity(3, 3));
    auto cat = enumerate_block(q, 2.0, Ball::Max);
    const std::string path = (tmp.path / "cat.qfcb").string();
    save_catalog(cat, path);
    const auto size = fs::file_size(path);
    fs::resize_file(path, size - 7);
    CHECK_THROWS_AS(load_catalog(path), CacheCorrupt);
}

TEST_CASE("bad magic rejected") {
    TempDir tmp;
    const std::string path = (tmp.path / "junk.qfcb").string();
    std::ofstream(path) << "NOTACATALOGFILE";
    CHECK_THROWS_AS(load_catalog(path), CacheCorrupt);
}

TEST_CASE("version bump rejected") {
    TempDir tmp;
    auto q = QuadraticForm::construct(Matrix::Identity(3, 3));
    auto cat = enumerate_block(q, 1.0, Ball::Max);
    const std::string path = (tmp.path / "cat.qfcb").string();
    save_catalog(cat, path);
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(4);
    std::uint32_t v = 99;
    f.write(reinterpret_cast<const char*>(&v), 4);
    f.close();
    CHECK_THROWS_AS(load_catalog(path), VersionMismatch);
}

TEST_CASE("cached enumeration hits the cache") {
    TempDir tmp;
    auto q = QuadraticForm::construct(Matrix::Identity(4, 4));
    auto a = cached_enumerate_block(q, 2.5, Ball::Euclidean, tmp.path.string());
    auto b = cached_enumerate_block(q, 2.5, Ball::Euclidean, tmp.path.string());
    REQUIRE(a.count() == b.count());
    // distinct T / mode get distinct keys
    CHECK(catalog_cache_key(q, 2.5, Ball::Euclidean) != catalog_cache_key(q, 2.5, Ball::Max));
    CHECK(catalog_cache_key(q, 2.5, Ball::Euclidean) != catalog_cache_key(q, 3.0, Ball::Euclidean));
}
