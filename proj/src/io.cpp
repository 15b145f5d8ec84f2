#include "tdnls/io.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace tdnls {

namespace {
constexpr char kMagic[8] = {'T', 'D', 'N', 'L', 'S', 'F', '1', '\0'};
}

void write_field(const std::string& path, const WaveState& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("write_field: cannot open " + path);
    out.write(kMagic, 8);
    const std::int32_t dim = state.grid.dim;
    const std::int32_t points = state.grid.points;
    const std::int32_t tag = state.frame.tag == FrameTag::Lens ? 1 : 0;
    const double hw = state.grid.half_width, sc = state.grid.scale, t = state.t;
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&points), 4);
    out.write(reinterpret_cast<const char*>(&hw), 8);
    out.write(reinterpret_cast<const char*>(&sc), 8);
    out.write(reinterpret_cast<const char*>(&tag), 4);
    out.write(reinterpret_cast<const char*>(&t), 8);
    for (const cplx& v : state.values) {
        const double re = v.real(), im = v.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

WaveState read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("read_field: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw DomainError("read_field: bad magic in " + path);
    std::int32_t dim = 0, points = 0, tag = 0;
    double hw = 0, sc = 0, t = 0;
    in.read(reinterpret_cast<char*>(&dim), 4);
    in.read(reinterpret_cast<char*>(&points), 4);
    in.read(reinterpret_cast<char*>(&hw), 8);
    in.read(reinterpret_cast<char*>(&sc), 8);
    in.read(reinterpret_cast<char*>(&tag), 4);
    in.read(reinterpret_cast<char*>(&t), 8);
    WaveState st;
    st.grid.dim = dim;
    st.grid.points = points;
    st.grid.half_width = hw;
    st.grid.scale = sc;
    st.frame.tag = tag == 1 ? FrameTag::Lens : FrameTag::Original;
    st.t = t;
    st.grid.validate();
    st.values.resize(st.grid.size());
    for (cplx& v : st.values) {
        double re = 0, im = 0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        v = cplx(re, im);
    }
    if (!in) throw DomainError("read_field: truncated file " + path);
    return st;
}

void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<const std::vector<double>*>& columns) {
    if (headers.size() != columns.size())
        throw DomainError("write_csv: header/column count mismatch");
    std::ofstream out(path);
    if (!out) throw DomainError("write_csv: cannot open " + path);
    out << std::setprecision(17);
    for (std::size_t c = 0; c < headers.size(); ++c)
        out << headers[c] << (c + 1 < headers.size() ? ',' : '\n');
    const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
    for (const auto* col : columns)
        if (col->size() != rows) throw DomainError("write_csv: ragged columns");
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (*columns[c])[r] << (c + 1 < columns.size() ? ',' : '\n');
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DomainError("write_text: cannot open " + path);
    out << text;
}

void ensure_directory(const std::string& path) {
    std::filesystem::create_directories(path);
}

std::string path_join(const std::string& a, const std::string& b) {
    return (std::filesystem::path(a) / b).string();
}

}  // namespace tdnls
