#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#ifndef PHOTONLAB_SOURCE_DIR
#define PHOTONLAB_SOURCE_DIR "."
#endif

namespace test_helpers {

inline std::filesystem::path repo_root() { return PHOTONLAB_SOURCE_DIR; }
inline std::filesystem::path config_dir() { return repo_root() / "configs"; }

/// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("photonlab_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

/// Random probability vector over n outcomes.
inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& v : p) {
        v = uni(rng);
        sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
}

/// Composite Simpson integration on [a, b].
template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace test_helpers
