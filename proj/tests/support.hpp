#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "scltpe/matrix.hpp"
#include "scltpe/rng.hpp"

namespace test_support {

inline scltpe::Matrix random_matrix(std::size_t r, std::size_t c, scltpe::Rng& rng,
                                    double scale = 1.0) {
    scltpe::Matrix m(r, c);
    for (double& v : m.data) v = scale * rng.normal();
    return m;
}

// Writes `text` to a unique file under the build temp dir; returns its path.
class TempFile {
public:
    TempFile(const std::string& name, const std::string& text) {
        const auto dir = std::filesystem::temp_directory_path() / "scltpe_tests";
        std::filesystem::create_directories(dir);
        path_ = (dir / name).string();
        std::ofstream out(path_);
        out << text;
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace test_support
