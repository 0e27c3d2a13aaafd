#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

#include "colorizer/errors.hpp"
#include "colorizer/model.hpp"

namespace colorizer {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'A', 'C', 'L', 'R'};

class Writer {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void text(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes_.insert(bytes_.end(), s.begin(), s.end());
    }
    void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::uint32_t u32() {
        need(4, "integer");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    std::string text(const char* what) {
        const std::uint32_t n = u32();
        need(n, what);
        std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                      bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return s;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    void need(std::size_t n, const char* what) const {
        if (remaining() < n)
            throw CheckpointError(CheckpointError::Kind::Corrupt,
                                  std::string("corrupt checkpoint: truncated while reading ") + what);
    }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

json grid_to_json(const ColorBinGrid& grid) {
    auto points = [](const std::vector<AbPoint>& pts) {
        json arr = json::array();
        for (const auto& p : pts) arr.push_back({p.a, p.b});
        return arr;
    };
    json mask = json::array();
    for (bool b : grid.in_gamut) mask.push_back(b ? 1 : 0);
    return {{"source", grid.source == ColorBinGrid::Source::Lattice ? "lattice" : "kmeans"},
            {"bin_size", grid.bin_size},
            {"candidates", points(grid.candidates)},
            {"in_gamut", mask},
            {"centers", points(grid.centers)}};
}

ColorBinGrid grid_from_json(const json& j) {
    auto points = [](const json& arr) {
        std::vector<AbPoint> pts;
        for (const auto& p : arr) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        return pts;
    };
    ColorBinGrid grid;
    grid.source = j.at("source") == "lattice" ? ColorBinGrid::Source::Lattice : ColorBinGrid::Source::KMeans;
    grid.bin_size = j.at("bin_size");
    grid.candidates = points(j.at("candidates"));
    for (const auto& b : j.at("in_gamut")) grid.in_gamut.push_back(b.get<int>() != 0);
    grid.centers = points(j.at("centers"));
    if (grid.centers.empty()) throw ConfigError("bin grid has no centers");
    return grid;
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(Network& network, const ColorBinGrid* grid) {
    if (network.config().head == HeadKind::Classification) {
        if (!grid) throw ConfigError("classification checkpoints must carry their bin grid");
        if (grid->size() != network.config().num_bins)
            throw ConfigError("bin grid size does not match the network's num_bins");
    }
    const json header{{"network", json::parse(to_json(network.config()))},
                      {"bin_grid", grid ? grid_to_json(*grid) : json(nullptr)}};
    Writer w;
    w.raw(kMagic, 4);
    w.u32(kCheckpointVersion);
    w.text(header.dump());
    const auto tensors = network.tensors();
    w.u32(static_cast<std::uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        w.text(t.name);
        const nn::Shape& s = t.tensor->shape();
        w.u32(4);
        for (int d : {s.n, s.c, s.h, s.w}) w.u32(static_cast<std::uint32_t>(d));
        for (float v : t.tensor->values()) w.f32(v);
    }
    return w.take();
}

void save_checkpoint(Network& network, const ColorBinGrid* grid, const fs::path& path) {
    const auto bytes = serialize_checkpoint(network, grid);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing checkpoint " + path.string());
}

LoadedModel deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
    using Kind = CheckpointError::Kind;
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw CheckpointError(Kind::NotACheckpoint, "not a checkpoint: missing ACLR magic");
    const std::vector<std::uint8_t> body(bytes.begin() + 4, bytes.end());
    Reader r(body);
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion)
        throw CheckpointError(Kind::UnsupportedVersion, "unsupported checkpoint version " + std::to_string(version) +
                                                            " (expected " + std::to_string(kCheckpointVersion) + ")");
    LoadedModel model;
    try {
        const json header = json::parse(r.text("header"));
        model.network = std::make_unique<Network>(net_config_from_json(header.at("network").dump()));
        if (!header.at("bin_grid").is_null()) model.grid = grid_from_json(header.at("bin_grid"));
    } catch (const CheckpointError&) {
        throw;
    } catch (const std::exception& e) {
        throw CheckpointError(Kind::Corrupt, std::string("corrupt checkpoint: bad header: ") + e.what());
    }
    if (model.network->config().head == HeadKind::Classification &&
        (!model.grid || model.grid->size() != model.network->config().num_bins))
        throw CheckpointError(Kind::Corrupt, "corrupt checkpoint: classification head without a matching bin grid");

    std::map<std::string, nn::Tensor*> expected;
    for (const auto& t : model.network->tensors()) expected[t.name] = t.tensor;

    const std::uint32_t count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::string name = r.text("tensor name");
        const auto it = expected.find(name);
        if (it == expected.end())
            throw CheckpointError(Kind::Corrupt, "corrupt checkpoint: unexpected or duplicate tensor '" + name + "'");
        const std::uint32_t ndim = r.u32();
        if (ndim < 1 || ndim > 4)
            throw CheckpointError(Kind::Corrupt, "corrupt checkpoint: tensor '" + name + "' has rank " +
                                                     std::to_string(ndim));
        int dims[4] = {1, 1, 1, 1};
        for (std::uint32_t d = 0; d < ndim; ++d) dims[4 - ndim + d] = static_cast<int>(r.u32());
        nn::Tensor& target = *it->second;
        if (!(target.shape() == nn::Shape{dims[0], dims[1], dims[2], dims[3]}))
            throw CheckpointError(Kind::Corrupt, "corrupt checkpoint: tensor '" + name + "' has shape " +
                                                     nn::Shape{dims[0], dims[1], dims[2], dims[3]}.str() +
                                                     ", network expects " + target.shape().str());
        r.need(target.size() * 4, "tensor data");
        for (auto& v : target.values()) v = r.f32();
        expected.erase(it);
    }
    if (!expected.empty())
        throw CheckpointError(Kind::Corrupt, "corrupt checkpoint: missing tensor '" + expected.begin()->first + "'");
    if (r.remaining() != 0) throw CheckpointError(Kind::Corrupt, "corrupt checkpoint: trailing bytes");
    return model;
}

LoadedModel load_checkpoint(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError(CheckpointError::Kind::Unreadable, "cannot open checkpoint " + path.string());
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        return deserialize_checkpoint(bytes);
    } catch (const CheckpointError& e) {
        throw CheckpointError(e.kind(), path.string() + ": " + e.what());
    }
}

}  // namespace colorizer
