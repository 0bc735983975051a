#include "choquard/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace choquard {

static_assert(std::endian::native == std::endian::little,
              "field dumps are little-endian; big-endian hosts need byte swaps");

std::uint64_t fnv1a64(const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::string content = read_text_file(path);
    return fnv1a64(content.data(), content.size());
}

void dump_field(const Field& u, const std::string& path) {
    validate_field(u);
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("dump_field: cannot open " + path);
        out.write(reinterpret_cast<const char*>(u.values.data()),
                  static_cast<std::streamsize>(u.values.size() * sizeof(double)));
        if (!out) throw std::runtime_error("dump_field: write failed for " + path);
    }
    nlohmann::json side;
    side["dim"] = u.grid.dim;
    side["L"] = u.grid.length;
    side["n"] = u.grid.n;
    side["offset"] = "half-cell";
    side["order"] = "row-major";
    write_text_file(path + ".json", side.dump(2) + "\n");
}

Field load_field(const std::string& path) {
    nlohmann::json side = nlohmann::json::parse(read_text_file(path + ".json"));
    GridSpec g = make_grid(side.at("dim").get<int>(), side.at("L").get<double>(),
                           side.at("n").get<int>());
    if (side.at("offset").get<std::string>() != "half-cell" ||
        side.at("order").get<std::string>() != "row-major")
        throw std::runtime_error("load_field: unsupported layout in sidecar of " + path);

    Field u(g);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    in.read(reinterpret_cast<char*>(u.values.data()),
            static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(u.values.size() * sizeof(double)))
        throw std::runtime_error("load_field: short read from " + path);
    validate_field(u);
    return u;
}

struct CsvWriter::Impl {
    std::ofstream out;
    size_t columns = 0;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) {
        delete impl_;
        throw std::runtime_error("CsvWriter: cannot open " + path);
    }
    impl_->columns = columns.size();
    for (size_t i = 0; i < columns.size(); ++i)
        impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != impl_->columns)
        throw std::invalid_argument("CsvWriter: row width does not match header");
    impl_->out << std::setprecision(17);
    for (size_t i = 0; i < values.size(); ++i)
        impl_->out << values[i] << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::close() {
    if (impl_ && impl_->out.is_open()) impl_->out.close();
}

CsvWriter::~CsvWriter() {
    close();
    delete impl_;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_text_file: cannot open " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write_text_file: write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_text_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace choquard
