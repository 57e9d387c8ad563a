#include "altro/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace altro::nn {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'A', 'L', 'T', 'R', 'O', 'C', 'K', '1'};
constexpr uint32_t kVersion = 1;

json train_config_to_json(const TrainConfig& c) {
    return json{{"epochs", c.epochs},
                {"lr", c.lr},
                {"weight_decay", c.weight_decay},
                {"dropout", c.dropout},
                {"batch_size", c.batch_size},
                {"aux_weight", c.aux_weight},
                {"move_emphasis", c.move_emphasis},
                {"seed", c.seed}};
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig c;
    c.epochs = j.at("epochs").get<int>();
    c.lr = j.at("lr").get<double>();
    c.weight_decay = j.at("weight_decay").get<double>();
    c.dropout = j.at("dropout").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.aux_weight = j.at("aux_weight").get<double>();
    c.move_emphasis = j.at("move_emphasis").get<double>();
    c.seed = j.at("seed").get<uint64_t>();
    return c;
}

}  // namespace

void save_checkpoint(const std::string& path, const PolicyNet& net,
                     const NormStats& stats, const TrainConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint file: " + path);

    json header;
    header["schema"] = net.schema.to_json();
    header["normalization"] = stats.to_json();
    header["hidden"] = net.hidden;
    header["train_config"] = train_config_to_json(cfg);
    json dims = json::array();
    for (const LinearLayer* l : net.layers()) dims.push_back({l->in_dim(), l->out_dim()});
    header["layer_dims"] = dims;
    const std::string hs = header.dump();

    out.write(kMagic, sizeof(kMagic));
    const uint32_t version = kVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const uint64_t hlen = hs.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));

    for (const LinearLayer* l : net.layers()) {
        out.write(reinterpret_cast<const char*>(l->W.a.data()),
                  static_cast<std::streamsize>(l->W.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(l->b.a.data()),
                  static_cast<std::streamsize>(l->b.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint file: " + path);

    char magic[sizeof(kMagic)];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("not a checkpoint file: " + path);
    uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (version != kVersion)
        throw std::runtime_error("unsupported checkpoint version in " + path);
    uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    std::string hs(hlen, '\0');
    in.read(hs.data(), static_cast<std::streamsize>(hlen));
    if (!in) throw std::runtime_error("truncated checkpoint header: " + path);
    const json header = json::parse(hs);

    Checkpoint ck;
    const FeatureSchema schema = FeatureSchema::from_json(header.at("schema"));
    if (!(schema == FeatureSchema{}))
        throw std::runtime_error("checkpoint feature schema does not match this build: " +
                                 path);
    ck.net = PolicyNet(schema, header.at("hidden").get<int>());
    ck.normalization = NormStats::from_json(header.at("normalization"));
    ck.train_config = train_config_from_json(header.at("train_config"));

    size_t li = 0;
    const json& dims = header.at("layer_dims");
    for (LinearLayer* l : ck.net.layers()) {
        const int in_dim = dims.at(li).at(0).get<int>();
        const int out_dim = dims.at(li).at(1).get<int>();
        ++li;
        if (in_dim != l->in_dim() || out_dim != l->out_dim())
            throw std::runtime_error("checkpoint layer dimensions do not match: " + path);
        in.read(reinterpret_cast<char*>(l->W.a.data()),
                static_cast<std::streamsize>(l->W.size() * sizeof(double)));
        in.read(reinterpret_cast<char*>(l->b.a.data()),
                static_cast<std::streamsize>(l->b.size() * sizeof(double)));
    }
    if (!in) throw std::runtime_error("truncated checkpoint parameters: " + path);
    return Checkpoint{std::move(ck.net), std::move(ck.normalization),
                      ck.train_config};
}

}  // namespace altro::nn
