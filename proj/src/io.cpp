#include "stfm/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

namespace stfm {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'F', 'M'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("truncated snapshot");
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string field_to_csv(const Field& f) {
    std::ostringstream os;
    os << "x,value\n";
    for (int i = 0; i < f.size(); ++i) {
        const double x = (f.L * static_cast<double>(i)) / static_cast<double>(f.size());
        os << format_double(x) << ',' << format_double(f.values[i]) << '\n';
    }
    return os.str();
}

void write_field_csv(const Field& f, const std::string& path) {
    write_text_file(path, field_to_csv(f));
}

Field read_field_csv(const std::string& path, double L) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::vector<double> vals;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed field CSV row: " + line);
        vals.push_back(std::stod(line.substr(comma + 1)));
    }
    Eigen::ArrayXd v = Eigen::Map<Eigen::ArrayXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    return field_from_samples(std::move(v), L);
}

void write_snapshot(const Field& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write(kMagic, 4);
    put(os, kVersion);
    put(os, static_cast<std::uint32_t>(f.size()));
    put(os, f.L);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(sizeof(double) * f.values.size()));
}

Field read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + " is not a field snapshot");
    const auto version = get<std::uint16_t>(is);
    if (version != kVersion)
        throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
    const auto M = get<std::uint32_t>(is);
    const auto L = get<double>(is);
    Eigen::ArrayXd v(M);
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double) * M));
    if (!is) throw std::runtime_error("truncated snapshot payload in " + path);
    return field_from_samples(std::move(v), L);
}

std::string diagnostics_to_csv(const std::vector<DiagnosticsRecord>& recs) {
    std::ostringstream os;
    os << "t,mass,l2,h1,dx_l2,min,energy_residual\n";
    for (const auto& r : recs) {
        os << format_double(r.t) << ',' << format_double(r.mass) << ','
           << format_double(r.l2) << ',' << format_double(r.h1) << ','
           << format_double(r.dx_l2) << ',' << format_double(r.min_value) << ','
           << format_double(r.energy_residual) << '\n';
    }
    return os.str();
}

void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& recs,
                           const std::string& path) {
    write_text_file(path, diagnostics_to_csv(recs));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace stfm
