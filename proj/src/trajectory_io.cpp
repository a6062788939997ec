#include "twoscale/trajectory_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace twoscale {
namespace {

constexpr char kMagic[8] = {'T', 'S', 'T', 'R', 'A', 'J', '0', '1'};
constexpr const char* kCsvTag = "# twoscale-trajectory v1";

bool is_binary_path(const std::string& path) { return path.size() >= 4 && path.ends_with(".bin"); }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
void put(std::ofstream& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(buf, sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
    char buf[sizeof(T)];
    if (!in.read(buf, sizeof(T))) throw FileError("truncated trajectory file", path);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

double parse_double(const std::string& s, const std::string& path) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw FileError("malformed number '" + s + "'", path);
    }
    if (used != s.size()) throw FileError("malformed number '" + s + "'", path);
    return v;
}

void write_csv(const std::string& path, const Trajectory& traj, const TrajectoryMeta& meta) {
    std::ofstream out(path);
    if (!out) throw FileError("cannot open trajectory file for writing", path);
    out << kCsvTag << '\n';
    out << "# model=" << traj.model_tag() << " epsilon=" << format_double(meta.epsilon)
        << " sigma=" << format_double(meta.sigma) << " dt=" << format_double(traj.dt()) << " seed=" << traj.seed()
        << " t0=" << format_double(traj.t0()) << " dimension=" << traj.dimension() << '\n';
    for (std::size_t i = 0; i < traj.dimension(); ++i) out << (i ? ",x" : "x") << i + 1;
    out << '\n';
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const auto x = traj.state(n);
        for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << format_double(x[i]);
        out << '\n';
    }
    if (!out) throw FileError("write failed", path);
}

TrajectoryFile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open trajectory file", path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvTag) throw FileError("not a trajectory CSV file", path);
    if (!std::getline(in, line) || !line.starts_with("# ")) throw FileError("missing trajectory header", path);

    std::map<std::string, std::string> header;
    std::istringstream fields(line.substr(2));
    std::string field;
    while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw FileError("malformed header field '" + field + "'", path);
        header[field.substr(0, eq)] = field.substr(eq + 1);
    }
    for (const char* key : {"model", "epsilon", "sigma", "dt", "seed", "t0", "dimension"}) {
        if (!header.contains(key)) throw FileError(std::string("header is missing '") + key + "'", path);
    }
    const auto dim = static_cast<std::size_t>(std::stoull(header["dimension"]));
    if (!std::getline(in, line)) throw FileError("missing column header", path);

    std::vector<double> data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::size_t cols = 0;
        while (std::getline(row, cell, ',')) {
            data.push_back(parse_double(cell, path));
            ++cols;
        }
        if (cols != dim) throw FileError("row has " + std::to_string(cols) + " columns, expected " + std::to_string(dim), path);
    }
    Trajectory traj(dim, parse_double(header["dt"], path), parse_double(header["t0"], path),
                    std::stoull(header["seed"]), header["model"], std::move(data));
    return {std::move(traj), {parse_double(header["epsilon"], path), parse_double(header["sigma"], path)}};
}

void write_binary(const std::string& path, const Trajectory& traj, const TrajectoryMeta& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot open trajectory file for writing", path);
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(traj.model_tag().size()));
    out.write(traj.model_tag().data(), static_cast<std::streamsize>(traj.model_tag().size()));
    put(out, meta.epsilon);
    put(out, meta.sigma);
    put(out, traj.dt());
    put(out, traj.t0());
    put<std::uint64_t>(out, traj.seed());
    put<std::uint64_t>(out, traj.dimension());
    put<std::uint64_t>(out, traj.size());
    for (double v : traj.data()) put(out, v);
    if (!out) throw FileError("write failed", path);
}

TrajectoryFile read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open trajectory file", path);
    char magic[sizeof kMagic];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw FileError("not a binary trajectory file", path);
    }
    const auto tag_len = get<std::uint32_t>(in, path);
    std::string tag(tag_len, '\0');
    if (!in.read(tag.data(), tag_len)) throw FileError("truncated trajectory file", path);
    const auto epsilon = get<double>(in, path);
    const auto sigma = get<double>(in, path);
    const auto dt = get<double>(in, path);
    const auto t0 = get<double>(in, path);
    const auto seed = get<std::uint64_t>(in, path);
    const auto dim = get<std::uint64_t>(in, path);
    const auto count = get<std::uint64_t>(in, path);
    std::vector<double> data(dim * count);
    for (auto& v : data) v = get<double>(in, path);
    Trajectory traj(dim, dt, t0, seed, std::move(tag), std::move(data));
    return {std::move(traj), {epsilon, sigma}};
}

}  // namespace

void write_trajectory(const std::string& path, const Trajectory& traj, const TrajectoryMeta& meta) {
    if (is_binary_path(path)) {
        write_binary(path, traj, meta);
    } else {
        write_csv(path, traj, meta);
    }
}

TrajectoryFile read_trajectory(const std::string& path) {
    return is_binary_path(path) ? read_binary(path) : read_csv(path);
}

}  // namespace twoscale
