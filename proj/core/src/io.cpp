#include "fdspec/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "fdspec/errors.hpp"
#include "fdspec/quantization.hpp"

namespace fdspec::io {

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace fdspec::io

namespace fdspec {

namespace {

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

} // namespace

void write_matrix(const OperatorMatrix& matrix, const std::string& path) {
    std::ofstream out(path + ".tmp", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + ".tmp for writing");
    out.write("MSPC1", 5);
    put(out, static_cast<uint32_t>(matrix.size()));
    put(out, static_cast<uint8_t>(matrix.backend == Backend::Oscillator ? 0 : 1));
    uint8_t family = 255;
    double b = 0.0, zeta = 0.0;
    int32_t m = 0, n = 0;
    if (matrix.params) {
        family = matrix.params->family == Family::Zeta ? 0 : 1;
        b = matrix.params->b;
        zeta = matrix.params->zeta;
        m = matrix.params->m;
        n = matrix.params->n;
    }
    put(out, family);
    put(out, b);
    put(out, zeta);
    put(out, m);
    put(out, n);
    const int N = matrix.size();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            put(out, matrix.entries(i, j).real());
            put(out, matrix.entries(i, j).imag());
        }
    if (!out) throw Error("write failed for " + path);
    out.close();
    std::filesystem::rename(path + ".tmp", path);
}

OperatorMatrix read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, "MSPC1", 5) != 0)
        throw Error(path + ": not a MSPC1 matrix dump");
    OperatorMatrix M;
    uint32_t N = get<uint32_t>(in);
    M.backend = get<uint8_t>(in) == 0 ? Backend::Oscillator : Backend::Grid;
    uint8_t family = get<uint8_t>(in);
    double b = get<double>(in);
    double zeta = get<double>(in);
    int32_t m = get<int32_t>(in);
    int32_t n = get<int32_t>(in);
    if (family == 0) M.params = ModelParams::zeta_family(b, zeta);
    else if (family == 1) M.params = ModelParams::mn_family(b, m, n);
    M.entries.resize(N, N);
    bool real = true;
    for (uint32_t i = 0; i < N; ++i)
        for (uint32_t j = 0; j < N; ++j) {
            double re = get<double>(in);
            double im = get<double>(in);
            if (im != 0.0) real = false;
            M.entries(i, j) = {re, im};
        }
    if (!in) throw Error(path + ": truncated matrix dump");
    M.is_real = real;
    return M;
}

} // namespace fdspec
