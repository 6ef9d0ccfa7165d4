#pragma once
// Shared test fixtures. G0 is a five-triple graph small enough to verify
// every context and metric by hand:
//   (A,r1,B) (A,r1,C) (B,r2,C) (C,r2,A) (D,r1,A)
// Interned ids: A=0 B=1 C=2 D=3, r1=0 r2=1.
// Densities (both roles): A=4 B=2 C=3 D=1.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mucos/kg.hpp"

namespace fixtures {

// Self-cleaning scratch directory for tests that touch the filesystem.
class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("mucos_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        const std::filesystem::path p = path_ / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }

    const std::filesystem::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline std::vector<mucos::RawTriple> g0_raw() {
    return {{"A", "r1", "B"},
            {"A", "r1", "C"},
            {"B", "r2", "C"},
            {"C", "r2", "A"},
            {"D", "r1", "A"}};
}

inline mucos::Dataset g0() { return mucos::build_dataset(g0_raw(), {}, {}); }

// G0 with a one-triple valid/test split (distinct from train).
inline mucos::Dataset g0_with_eval() {
    return mucos::build_dataset(g0_raw(), {{"B", "r1", "D"}}, {{"C", "r1", "D"}});
}

}  // namespace fixtures
