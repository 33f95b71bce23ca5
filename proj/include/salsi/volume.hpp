// Core grid types and the on-disk volume format.
//
// A volume is a dense scalar grid of size M x N x K (time-depth, crossline,
// inline), stored in C order over (m,n,k): m slowest, k fastest. On disk it
// is a JSON sidecar header plus a raw little-endian float32 payload.

#ifndef SALSI_VOLUME_HPP
#define SALSI_VOLUME_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "salsi/config.hpp"
#include "salsi/errors.hpp"

namespace salsi {

struct Dims3 {
    int m = 0;  // time-depth samples
    int n = 0;  // crosslines
    int k = 0;  // inlines

    bool operator==(const Dims3&) const = default;
    std::int64_t count() const { return std::int64_t(m) * n * k; }
};

std::string dims_str(const Dims3& d);

struct Volume3D {
    Dims3 dims;
    std::vector<float> data;  // size dims.count()
    std::array<std::string, 3> axis_labels{"time", "crossline", "inline"};
    std::optional<double> sample_interval_ms;  // metadata only

    Volume3D() = default;
    explicit Volume3D(Dims3 d, float fill = 0.0f);
    Volume3D(Dims3 d, std::vector<float> values);

    std::int64_t index(int mi, int ni, int ki) const {
        return (std::int64_t(mi) * dims.n + ni) * dims.k + ki;
    }
    float operator()(int mi, int ni, int ki) const { return data[index(mi, ni, ki)]; }
    float& operator()(int mi, int ni, int ki) { return data[index(mi, ni, ki)]; }
};

// The fused saliency result is an ordinary volume with values in [0,1].
using SaliencyVolume = Volume3D;

struct BinaryVolume {
    Dims3 dims;
    std::vector<std::uint8_t> bits;  // 0 or 1, same layout as Volume3D

    BinaryVolume() = default;
    explicit BinaryVolume(Dims3 d, bool fill = false);

    std::int64_t index(int mi, int ni, int ki) const {
        return (std::int64_t(mi) * dims.n + ni) * dims.k + ki;
    }
    bool get(int mi, int ni, int ki) const { return bits[index(mi, ni, ki)] != 0; }
    void set(int mi, int ni, int ki, bool v) { bits[index(mi, ni, ki)] = v ? 1 : 0; }
    std::int64_t count_true() const;
};

struct VolumeHeader {
    Dims3 dims;
    std::string dtype = "f32le";
    std::array<std::string, 3> axes{"time", "crossline", "inline"};
    std::string provenance;
};

VolumeHeader read_header(const std::filesystem::path& header_path);

Volume3D load_volume(const std::filesystem::path& header_path,
                     const std::filesystem::path& payload_path);

void save_volume(const Volume3D& v, const std::filesystem::path& header_path,
                 const std::filesystem::path& payload_path,
                 const std::string& provenance = "");

// Derives "<stem>.raw" next to a header path.
std::filesystem::path payload_path_for(const std::filesystem::path& header_path);

// Writes one slice as a binary PGM (P5, maxval 255), min-max normalized over
// the slice. Constant slices map to mid-gray 128. Image rows follow the first
// remaining axis, columns the second (inline slice: rows = time, cols = crossline).
void export_slice(const Volume3D& v, Axis axis, int index,
                  const std::filesystem::path& out);

// Binary masks travel through the same volume format with 0.0/1.0 payloads.
Volume3D from_binary(const BinaryVolume& b);
BinaryVolume to_binary(const Volume3D& v);  // rejects values other than exact 0/1

}  // namespace salsi

#endif
