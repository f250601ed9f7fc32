#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace trxcat {

// Artifact container: 8-byte magic+version, u64 header length, JSON
// header, then raw little-endian tensor payloads at the offsets the
// header records. Round-trips are byte-exact.
class ContainerWriter {
public:
    explicit ContainerWriter(std::string kind);

    nlohmann::ordered_json& meta() { return meta_; }

    void add_tensor(const std::string& name, const std::string& dtype,
                    std::vector<std::size_t> shape, const void* data, std::size_t bytes);

    void add_f32(const std::string& name, std::vector<std::size_t> shape,
                 std::span<const float> data);
    void add_f64(const std::string& name, std::vector<std::size_t> shape,
                 std::span<const double> data);
    void add_i32(const std::string& name, std::vector<std::size_t> shape,
                 std::span<const std::int32_t> data);

    std::vector<std::uint8_t> to_bytes() const;
    void write(const std::string& path) const;

private:
    struct Tensor {
        std::string name;
        std::string dtype;
        std::vector<std::size_t> shape;
        std::vector<std::uint8_t> payload;
    };
    std::string kind_;
    nlohmann::ordered_json meta_;
    std::vector<Tensor> tensors_;
};

class ContainerReader {
public:
    static ContainerReader from_bytes(std::vector<std::uint8_t> bytes);
    static ContainerReader from_file(const std::string& path);

    const std::string& kind() const { return kind_; }
    const nlohmann::json& meta() const { return meta_; }

    bool has_tensor(const std::string& name) const;
    std::vector<std::size_t> tensor_shape(const std::string& name) const;

    std::vector<float> f32(const std::string& name) const;
    std::vector<double> f64(const std::string& name) const;
    std::vector<std::int32_t> i32(const std::string& name) const;

private:
    ContainerReader() = default;

    const nlohmann::json& tensor_entry(const std::string& name) const;
    std::span<const std::uint8_t> tensor_bytes(const std::string& name,
                                               const std::string& dtype) const;

    std::string kind_;
    nlohmann::json header_;
    nlohmann::json meta_;
    std::vector<std::uint8_t> bytes_;
    std::size_t payload_start_ = 0;
};

}  // namespace trxcat
