#include "sosbound/sdpa_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sosbound {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string sdpa_string(const SdpProblem& prob) {
    prob.validate(1e-9);
    const int m = prob.num_vars();
    std::ostringstream os;
    os << m << "\n";
    os << prob.num_blocks() << "\n";
    for (int k = 0; k < prob.num_blocks(); ++k) {
        if (k) os << " ";
        os << prob.c_blocks[k].rows();
    }
    os << "\n";
    for (int i = 0; i < m; ++i) {
        if (i) os << " ";
        os << fmt(-prob.b[i]);
    }
    os << "\n";
    // Entries: F0 = -C, F_i = -A_i; upper triangle, 1-based indices.
    for (int k = 0; k < prob.num_blocks(); ++k) {
        const auto& c = prob.c_blocks[k];
        for (int i = 0; i < c.rows(); ++i) {
            for (int j = i; j < c.cols(); ++j) {
                if (c(i, j) != 0.0)
                    os << "0 " << k + 1 << " " << i + 1 << " " << j + 1 << " " << fmt(-c(i, j))
                       << "\n";
            }
        }
    }
    for (int v = 0; v < m; ++v) {
        for (int k = 0; k < prob.num_blocks(); ++k) {
            const auto& a = prob.a_blocks[k][v];
            for (int i = 0; i < a.rows(); ++i) {
                for (int j = i; j < a.cols(); ++j) {
                    if (a(i, j) != 0.0)
                        os << v + 1 << " " << k + 1 << " " << i + 1 << " " << j + 1 << " "
                           << fmt(-a(i, j)) << "\n";
                }
            }
        }
    }
    return os.str();
}

void export_sdpa(const SdpProblem& prob, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_sdpa: cannot open " + path);
    out << sdpa_string(prob);
    if (!out) throw std::runtime_error("export_sdpa: write failed for " + path);
}

SdpProblem import_sdpa_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_data_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const char c = line[0];
            if (c == '"' || c == '*') continue;
            return line;
        }
        throw std::runtime_error("import_sdpa: unexpected end of file");
    };

    auto strip = [](std::string s) {
        for (char& c : s)
            if (c == ',' || c == '{' || c == '}' || c == '(' || c == ')') c = ' ';
        return s;
    };

    const int m = std::stoi(next_data_line());
    const int nblocks = std::stoi(next_data_line());
    std::vector<int> sizes;
    {
        std::istringstream bs(strip(next_data_line()));
        int s;
        while (bs >> s) sizes.push_back(std::abs(s));
        if (static_cast<int>(sizes.size()) != nblocks)
            throw std::runtime_error("import_sdpa: block size count mismatch");
    }
    SdpProblem prob;
    prob.b = Eigen::VectorXd::Zero(m);
    {
        std::istringstream cs(strip(next_data_line()));
        for (int i = 0; i < m; ++i) {
            double v;
            if (!(cs >> v)) throw std::runtime_error("import_sdpa: objective vector too short");
            prob.b[i] = -v;
        }
    }
    prob.c_blocks.reserve(nblocks);
    prob.a_blocks.resize(nblocks);
    for (int k = 0; k < nblocks; ++k) {
        prob.c_blocks.emplace_back(Eigen::MatrixXd::Zero(sizes[k], sizes[k]));
        prob.a_blocks[k].assign(m, Eigen::MatrixXd::Zero(sizes[k], sizes[k]));
    }
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '"' || line[0] == '*') continue;
        std::istringstream es(strip(line));
        int matno, blk, i, j;
        double v;
        if (!(es >> matno >> blk >> i >> j >> v)) continue;
        if (blk < 1 || blk > nblocks) throw std::runtime_error("import_sdpa: bad block index");
        Eigen::MatrixXd& target =
            matno == 0 ? prob.c_blocks[blk - 1] : prob.a_blocks[blk - 1][matno - 1];
        if (matno < 0 || matno > m) throw std::runtime_error("import_sdpa: bad matrix index");
        if (i < 1 || j < 1 || i > sizes[blk - 1] || j > sizes[blk - 1])
            throw std::runtime_error("import_sdpa: entry out of range");
        target(i - 1, j - 1) = -v;
        target(j - 1, i - 1) = -v;
    }
    return prob;
}

SdpProblem import_sdpa(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("import_sdpa: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return import_sdpa_string(ss.str());
}

}  // namespace sosbound
