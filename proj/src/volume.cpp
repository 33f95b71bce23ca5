#include "salsi/volume.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "raw payload IO assumes a little-endian host");
static_assert(sizeof(float) == 4);

namespace salsi {

namespace fs = std::filesystem;
using nlohmann::json;

std::string dims_str(const Dims3& d) {
    std::ostringstream os;
    os << d.m << "x" << d.n << "x" << d.k;
    return os.str();
}

static void check_dims(const Dims3& d) {
    if (d.m < 1 || d.n < 1 || d.k < 1)
        throw InputError("volume dims must all be >= 1, got " + dims_str(d));
}

Volume3D::Volume3D(Dims3 d, float fill) : dims(d) {
    check_dims(d);
    data.assign(static_cast<std::size_t>(d.count()), fill);
}

Volume3D::Volume3D(Dims3 d, std::vector<float> values) : dims(d), data(std::move(values)) {
    check_dims(d);
    if (std::int64_t(data.size()) != d.count())
        throw InputError("volume data length " + std::to_string(data.size()) +
                         " does not match dims " + dims_str(d));
}

BinaryVolume::BinaryVolume(Dims3 d, bool fill) : dims(d) {
    check_dims(d);
    bits.assign(static_cast<std::size_t>(d.count()), fill ? 1 : 0);
}

std::int64_t BinaryVolume::count_true() const {
    std::int64_t n = 0;
    for (auto b : bits) n += b != 0;
    return n;
}

VolumeHeader read_header(const fs::path& header_path) {
    std::ifstream in(header_path);
    if (!in) throw InputError("cannot open header " + header_path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("malformed header " + header_path.string() + ": " + e.what());
    }

    VolumeHeader h;
    try {
        auto dims = j.at("dims");
        if (!dims.is_array() || dims.size() != 3)
            throw InputError("header " + header_path.string() + ": dims must be [M,N,K]");
        h.dims = {dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>()};
        h.dtype = j.at("dtype").get<std::string>();
        if (j.contains("axes")) {
            auto axes = j["axes"];
            for (int i = 0; i < 3 && i < int(axes.size()); ++i)
                h.axes[i] = axes[i].get<std::string>();
        }
        if (j.contains("provenance")) h.provenance = j["provenance"].get<std::string>();
    } catch (const json::exception& e) {
        throw InputError("malformed header " + header_path.string() + ": " + e.what());
    }
    if (h.dtype != "f32le")
        throw InputError("header " + header_path.string() + ": unsupported dtype '" +
                         h.dtype + "'");
    check_dims(h.dims);
    return h;
}

Volume3D load_volume(const fs::path& header_path, const fs::path& payload_path) {
    VolumeHeader h = read_header(header_path);

    std::ifstream in(payload_path, std::ios::binary);
    if (!in) throw InputError("cannot open payload " + payload_path.string());
    in.seekg(0, std::ios::end);
    const std::int64_t file_size = in.tellg();
    in.seekg(0, std::ios::beg);

    const std::int64_t expected = h.dims.count() * 4;
    if (file_size != expected)
        throw InputError("payload " + payload_path.string() + " is " +
                         std::to_string(file_size) + " bytes, expected " +
                         std::to_string(expected) + " for dims " + dims_str(h.dims));

    std::vector<float> values(static_cast<std::size_t>(h.dims.count()));
    in.read(reinterpret_cast<char*>(values.data()), expected);
    if (!in) throw InputError("short read on payload " + payload_path.string());

    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw InputError("payload " + payload_path.string() +
                             " has non-finite value at index " + std::to_string(i));
    }

    Volume3D v(h.dims, std::move(values));
    v.axis_labels = h.axes;
    return v;
}

// Writes through a temp file so a failed save never leaves a partial output.
static void atomic_write(const fs::path& path, const char* bytes, std::size_t size) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot open " + tmp.string() + " for writing");
        out.write(bytes, std::streamsize(size));
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw InputError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

void save_volume(const Volume3D& v, const fs::path& header_path,
                 const fs::path& payload_path, const std::string& provenance) {
    check_dims(v.dims);

    json j;
    j["dims"] = {v.dims.m, v.dims.n, v.dims.k};
    j["dtype"] = "f32le";
    j["axes"] = {v.axis_labels[0], v.axis_labels[1], v.axis_labels[2]};
    j["provenance"] = provenance;
    const std::string text = j.dump(2) + "\n";
    atomic_write(header_path, text.data(), text.size());

    atomic_write(payload_path, reinterpret_cast<const char*>(v.data.data()),
                 v.data.size() * 4);
}

fs::path payload_path_for(const fs::path& header_path) {
    fs::path p = header_path;
    p.replace_extension(".raw");
    return p;
}

void export_slice(const Volume3D& v, Axis axis, int index, const fs::path& out) {
    int extent = 0, rows = 0, cols = 0;
    switch (axis) {
        case Axis::Time:      extent = v.dims.m; rows = v.dims.n; cols = v.dims.k; break;
        case Axis::Crossline: extent = v.dims.n; rows = v.dims.m; cols = v.dims.k; break;
        case Axis::Inline:    extent = v.dims.k; rows = v.dims.m; cols = v.dims.n; break;
    }
    if (index < 0 || index >= extent)
        throw InputError("slice index " + std::to_string(index) + " out of range [0," +
                         std::to_string(extent - 1) + "] on axis " + axis_name(axis));

    auto value = [&](int r, int c) {
        switch (axis) {
            case Axis::Time: return v(index, r, c);
            case Axis::Crossline: return v(r, index, c);
            default: return v(r, c, index);
        }
    };

    float lo = value(0, 0), hi = value(0, 0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            float x = value(r, c);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }

    std::vector<std::uint8_t> pixels(std::size_t(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            std::uint8_t px = 128;  // constant slice: degenerate normalization
            if (hi > lo) {
                double t = (double(value(r, c)) - lo) / (double(hi) - lo);
                px = std::uint8_t(std::llround(t * 255.0));
            }
            pixels[std::size_t(r) * cols + c] = px;
        }

    std::ostringstream header;
    header << "P5\n" << cols << " " << rows << "\n255\n";
    std::string bytes = header.str();
    bytes.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
    atomic_write(out, bytes.data(), bytes.size());
}

Volume3D from_binary(const BinaryVolume& b) {
    Volume3D v(b.dims);
    for (std::size_t i = 0; i < b.bits.size(); ++i) v.data[i] = b.bits[i] ? 1.0f : 0.0f;
    return v;
}

BinaryVolume to_binary(const Volume3D& v) {
    BinaryVolume b(v.dims);
    for (std::size_t i = 0; i < v.data.size(); ++i) {
        float x = v.data[i];
        if (x != 0.0f && x != 1.0f)
            throw InputError("binary volume payload has value " + std::to_string(x) +
                             " at index " + std::to_string(i) + "; expected 0 or 1");
        b.bits[i] = x == 1.0f ? 1 : 0;
    }
    return b;
}

}  // namespace salsi
