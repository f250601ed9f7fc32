#include "trxcat/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "trxcat/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "container payloads are little-endian");

namespace trxcat {

namespace {

constexpr std::uint8_t kMagic[8] = {'T', 'R', 'X', 'C', 'A', 'T', 0, 1};

std::size_t dtype_size(const std::string& dtype) {
    if (dtype == "f32" || dtype == "i32" || dtype == "u32") return 4;
    if (dtype == "f64" || dtype == "i64") return 8;
    throw_validation("unknown tensor dtype '" + dtype + "'");
}

std::size_t shape_elements(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    return n;
}

}  // namespace

ContainerWriter::ContainerWriter(std::string kind) : kind_(std::move(kind)) {
    meta_ = nlohmann::ordered_json::object();
}

void ContainerWriter::add_tensor(const std::string& name, const std::string& dtype,
                                 std::vector<std::size_t> shape, const void* data,
                                 std::size_t bytes) {
    if (shape_elements(shape) * dtype_size(dtype) != bytes) {
        throw_validation("tensor '" + name + "': shape does not match payload size");
    }
    Tensor t;
    t.name = name;
    t.dtype = dtype;
    t.shape = std::move(shape);
    t.payload.resize(bytes);
    std::memcpy(t.payload.data(), data, bytes);
    tensors_.push_back(std::move(t));
}

void ContainerWriter::add_f32(const std::string& name, std::vector<std::size_t> shape,
                              std::span<const float> data) {
    add_tensor(name, "f32", std::move(shape), data.data(), data.size_bytes());
}

void ContainerWriter::add_f64(const std::string& name, std::vector<std::size_t> shape,
                              std::span<const double> data) {
    add_tensor(name, "f64", std::move(shape), data.data(), data.size_bytes());
}

void ContainerWriter::add_i32(const std::string& name, std::vector<std::size_t> shape,
                              std::span<const std::int32_t> data) {
    add_tensor(name, "i32", std::move(shape), data.data(), data.size_bytes());
}

std::vector<std::uint8_t> ContainerWriter::to_bytes() const {
    nlohmann::ordered_json header;
    header["format_version"] = 1;
    header["kind"] = kind_;
    header["meta"] = meta_;
    nlohmann::ordered_json tensor_list = nlohmann::ordered_json::array();
    std::size_t offset = 0;
    for (const auto& t : tensors_) {
        nlohmann::ordered_json entry;
        entry["name"] = t.name;
        entry["dtype"] = t.dtype;
        entry["shape"] = t.shape;
        entry["offset"] = offset;
        entry["bytes"] = t.payload.size();
        tensor_list.push_back(std::move(entry));
        offset += t.payload.size();
    }
    header["tensors"] = std::move(tensor_list);
    const std::string header_text = header.dump();

    std::vector<std::uint8_t> out;
    out.reserve(16 + header_text.size() + offset);
    out.insert(out.end(), kMagic, kMagic + 8);
    std::uint64_t header_len = header_text.size();
    const auto* len_bytes = reinterpret_cast<const std::uint8_t*>(&header_len);
    out.insert(out.end(), len_bytes, len_bytes + 8);
    out.insert(out.end(), header_text.begin(), header_text.end());
    for (const auto& t : tensors_) {
        out.insert(out.end(), t.payload.begin(), t.payload.end());
    }
    return out;
}

void ContainerWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write artifact '" + path + "'");
    const auto bytes = to_bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw_io("write failed for '" + path + "'");
}

ContainerReader ContainerReader::from_bytes(std::vector<std::uint8_t> bytes) {
    ContainerReader reader;
    reader.bytes_ = std::move(bytes);
    if (reader.bytes_.size() < 16 || std::memcmp(reader.bytes_.data(), kMagic, 8) != 0) {
        throw_schema("not an artifact container (bad magic)");
    }
    std::uint64_t header_len = 0;
    std::memcpy(&header_len, reader.bytes_.data() + 8, 8);
    if (16 + header_len > reader.bytes_.size()) throw_schema("artifact header is truncated");
    try {
        reader.header_ = nlohmann::json::parse(reader.bytes_.begin() + 16,
                                               reader.bytes_.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
    } catch (const nlohmann::json::parse_error& e) {
        throw_schema(std::string("artifact header is not valid JSON: ") + e.what());
    }
    reader.kind_ = reader.header_.value("kind", std::string());
    reader.meta_ = reader.header_.value("meta", nlohmann::json::object());
    reader.payload_start_ = 16 + header_len;
    return reader;
}

ContainerReader ContainerReader::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open artifact '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return from_bytes(std::move(bytes));
}

const nlohmann::json& ContainerReader::tensor_entry(const std::string& name) const {
    for (const auto& entry : header_.at("tensors")) {
        if (entry.at("name") == name) return entry;
    }
    throw_schema("artifact has no tensor '" + name + "'");
}

bool ContainerReader::has_tensor(const std::string& name) const {
    for (const auto& entry : header_.at("tensors")) {
        if (entry.at("name") == name) return true;
    }
    return false;
}

std::vector<std::size_t> ContainerReader::tensor_shape(const std::string& name) const {
    return tensor_entry(name).at("shape").get<std::vector<std::size_t>>();
}

std::span<const std::uint8_t> ContainerReader::tensor_bytes(const std::string& name,
                                                            const std::string& dtype) const {
    const auto& entry = tensor_entry(name);
    if (entry.at("dtype") != dtype) {
        throw_schema("tensor '" + name + "' has dtype " +
                     entry.at("dtype").get<std::string>() + ", expected " + dtype);
    }
    const std::size_t offset = entry.at("offset").get<std::size_t>();
    const std::size_t bytes = entry.at("bytes").get<std::size_t>();
    if (payload_start_ + offset + bytes > bytes_.size()) {
        throw_schema("tensor '" + name + "' overruns the artifact");
    }
    return {bytes_.data() + payload_start_ + offset, bytes};
}

std::vector<float> ContainerReader::f32(const std::string& name) const {
    auto raw = tensor_bytes(name, "f32");
    std::vector<float> out(raw.size() / 4);
    std::memcpy(out.data(), raw.data(), raw.size());
    return out;
}

std::vector<double> ContainerReader::f64(const std::string& name) const {
    auto raw = tensor_bytes(name, "f64");
    std::vector<double> out(raw.size() / 8);
    std::memcpy(out.data(), raw.data(), raw.size());
    return out;
}

std::vector<std::int32_t> ContainerReader::i32(const std::string& name) const {
    auto raw = tensor_bytes(name, "i32");
    std::vector<std::int32_t> out(raw.size() / 4);
    std::memcpy(out.data(), raw.data(), raw.size());
    return out;
}

}  // namespace trxcat
