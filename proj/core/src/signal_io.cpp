#include "persym/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace persym {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    std::ifstream in(path, mode);
    if (!in) throw io_error("cannot open for reading: " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    std::ofstream out(path, mode);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    return out;
}

// "key=value" scanner for the CSV header comment.
double header_value(const std::string& line, const std::string& key) {
    auto pos = line.find(key + "=");
    if (pos == std::string::npos) throw io_error("malformed header: missing " + key);
    return std::strtod(line.c_str() + pos + key.size() + 1, nullptr);
}

std::vector<double> parse_csv_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::strtod(cell.c_str(), nullptr));
    return out;
}

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_f64(std::ofstream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw io_error("unexpected end of binary file");
    return v;
}
double read_f64(std::ifstream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw io_error("unexpected end of binary file");
    return v;
}

constexpr char kSignalMagic[9] = "PSYMSIG1";
constexpr char kCellMagic[9] = "PSYMCEL1";

}  // namespace

void save_signal_csv(const GridSignal& f, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# persym signal v1 dim=" << f.dim << " extent=" << format_double(f.extent)
        << " npoints=" << f.npoints << "\n";
    for (int axis = 0; axis < f.dim; ++axis) out << "x" << axis + 1 << ",";
    out << "re,im\n";
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        auto t = f.node(flat);
        for (double c : t) out << format_double(c) << ",";
        out << format_double(f.values[flat].real()) << "," << format_double(f.values[flat].imag())
            << "\n";
    }
}

GridSignal load_signal_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# persym signal", 0) != 0)
        throw io_error("not a persym signal CSV: " + path.string());
    int d = static_cast<int>(header_value(line, "dim"));
    double T = header_value(line, "extent");
    int N = static_cast<int>(header_value(line, "npoints"));
    std::getline(in, line);  // column header
    GridSignal f(d, T, N);
    std::size_t flat = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto row = parse_csv_row(line);
        if (row.size() != static_cast<std::size_t>(d) + 2)
            throw io_error("bad signal CSV row arity");
        if (flat >= f.size()) throw io_error("too many rows in signal CSV");
        f.values[flat++] = cplx(row[static_cast<std::size_t>(d)],
                                row[static_cast<std::size_t>(d) + 1]);
    }
    if (flat != f.size()) throw io_error("signal CSV row count mismatch");
    return f;
}

void save_signal_bin(const GridSignal& f, const std::filesystem::path& path) {
    auto out = open_out(path, std::ios::binary);
    out.write(kSignalMagic, 8);
    write_u32(out, static_cast<std::uint32_t>(f.dim));
    write_u32(out, static_cast<std::uint32_t>(f.npoints));
    write_f64(out, f.extent);
    for (const cplx& v : f.values) {
        write_f64(out, v.real());
        write_f64(out, v.imag());
    }
}

GridSignal load_signal_bin(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kSignalMagic, 8) != 0)
        throw io_error("not a persym signal binary: " + path.string());
    int d = static_cast<int>(read_u32(in));
    int N = static_cast<int>(read_u32(in));
    double T = read_f64(in);
    GridSignal f(d, T, N);
    for (cplx& v : f.values) {
        double re = read_f64(in);
        double im = read_f64(in);
        v = cplx(re, im);
    }
    return f;
}

void save_signal(const GridSignal& f, const std::filesystem::path& path) {
    if (path.extension() == ".csv") save_signal_csv(f, path);
    else save_signal_bin(f, path);
}

GridSignal load_signal(const std::filesystem::path& path) {
    if (path.extension() == ".csv") return load_signal_csv(path);
    return load_signal_bin(path);
}

void save_cell_samples_csv(const PeriodCellSamples& c, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# persym cell v1 dim=" << c.dim() << " M=" << c.M << "\n";
    out << "# L=";
    const auto& e = c.L.entries();
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? "," : "") << format_double(e[i]);
    out << "\n";
    for (int axis = 0; axis < c.dim(); ++axis) out << "y" << axis + 1 << ",";
    out << "re,im\n";
    for (std::size_t flat = 0; flat < c.size(); ++flat) {
        auto y = c.unit_node(flat);
        for (double v : y) out << format_double(v) << ",";
        out << format_double(c.values[flat].real()) << "," << format_double(c.values[flat].imag())
            << "\n";
    }
}

PeriodCellSamples load_cell_samples_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# persym cell", 0) != 0)
        throw io_error("not a persym cell CSV: " + path.string());
    int n = static_cast<int>(header_value(line, "dim"));
    int M = static_cast<int>(header_value(line, "M"));
    if (!std::getline(in, line) || line.rfind("# L=", 0) != 0)
        throw io_error("cell CSV missing period matrix line");
    auto entries = parse_csv_row(line.substr(4));
    PeriodMatrix L(n, std::move(entries));
    std::getline(in, line);  // column header
    std::vector<cplx> vals;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto row = parse_csv_row(line);
        if (row.size() != static_cast<std::size_t>(n) + 2) throw io_error("bad cell CSV row arity");
        vals.emplace_back(row[static_cast<std::size_t>(n)], row[static_cast<std::size_t>(n) + 1]);
    }
    return PeriodCellSamples(std::move(L), M, std::move(vals));
}

void save_cell_samples_bin(const PeriodCellSamples& c, const std::filesystem::path& path) {
    auto out = open_out(path, std::ios::binary);
    out.write(kCellMagic, 8);
    write_u32(out, static_cast<std::uint32_t>(c.dim()));
    write_u32(out, static_cast<std::uint32_t>(c.M));
    for (double v : c.L.entries()) write_f64(out, v);
    for (const cplx& v : c.values) {
        write_f64(out, v.real());
        write_f64(out, v.imag());
    }
}

PeriodCellSamples load_cell_samples_bin(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCellMagic, 8) != 0)
        throw io_error("not a persym cell binary: " + path.string());
    int n = static_cast<int>(read_u32(in));
    int M = static_cast<int>(read_u32(in));
    std::vector<double> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (double& v : entries) v = read_f64(in);
    PeriodMatrix L(n, std::move(entries));
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(M);
    std::vector<cplx> vals(total);
    for (cplx& v : vals) {
        double re = read_f64(in);
        double im = read_f64(in);
        v = cplx(re, im);
    }
    return PeriodCellSamples(std::move(L), M, std::move(vals));
}

void save_cell_samples(const PeriodCellSamples& c, const std::filesystem::path& path) {
    if (path.extension() == ".csv") save_cell_samples_csv(c, path);
    else save_cell_samples_bin(c, path);
}

PeriodCellSamples load_cell_samples(const std::filesystem::path& path) {
    if (path.extension() == ".csv") return load_cell_samples_csv(path);
    return load_cell_samples_bin(path);
}

void save_symbol_json(const PeriodicSymbol& p, const std::filesystem::path& path) {
    nlohmann::json j;
    j["schema"] = 1;
    j["kind"] = "persym-symbol";
    j["L"] = {{"n", p.dim()}, {"entries", p.L.entries()}};
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& [kappa, c] : p.coeffs) {
        recs.push_back({{"k", kappa.k}, {"re", c.real()}, {"im", c.imag()}});
    }
    j["coefficients"] = std::move(recs);
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

PeriodicSymbol load_symbol_json(const std::filesystem::path& path) {
    auto in = open_in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw io_error("bad symbol JSON: " + std::string(e.what()));
    }
    if (!j.contains("L") || !j.contains("coefficients"))
        throw io_error("symbol JSON missing L or coefficients");
    int n = j["L"]["n"].get<int>();
    PeriodMatrix L(n, j["L"]["entries"].get<std::vector<double>>());
    std::map<MultiIndex, cplx> coeffs;
    for (const auto& rec : j["coefficients"]) {
        MultiIndex k(rec["k"].get<std::vector<int>>());
        coeffs.emplace(std::move(k), cplx(rec["re"].get<double>(), rec["im"].get<double>()));
    }
    return PeriodicSymbol(std::move(L), std::move(coeffs));
}

}  // namespace persym
