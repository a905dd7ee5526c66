#include "instancecut/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>

namespace instancecut {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
    return v;
}

// Parses the "N N ...\n" header following the magic; returns the offset of the payload.
std::size_t parse_header(std::string_view bytes, std::string_view magic, std::vector<long long>& dims, std::size_t count) {
    if (bytes.substr(0, magic.size()) != magic) throw ValidationError("bad magic: expected " + std::string(magic.substr(0, 4)));
    const std::size_t end = bytes.find('\n', magic.size());
    if (end == std::string_view::npos) throw ValidationError("truncated header");
    const std::string_view line = bytes.substr(magic.size(), end - magic.size());
    const char* p = line.data();
    const char* last = line.data() + line.size();
    dims.clear();
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) {
            if (p == last || *p != ' ') throw ValidationError("malformed header");
            ++p;
        }
        long long v = 0;
        const auto [next, ec] = std::from_chars(p, last, v);
        if (ec != std::errc() || v <= 0) throw ValidationError("malformed header dimension");
        dims.push_back(v);
        p = next;
    }
    if (p != last) throw ValidationError("malformed header");
    return end + 1;
}

}  // namespace

std::string encode_sgm(const ScoreGrid& grid) {
    std::string out = "SGM1\n" + std::to_string(grid.height()) + " " + std::to_string(grid.width()) + " " +
                      std::to_string(grid.channels()) + "\n";
    out.reserve(out.size() + grid.values().size() * 4);
    for (float v : grid.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

ScoreGrid decode_sgm(std::string_view bytes) {
    std::vector<long long> dims;
    const std::size_t offset = parse_header(bytes, "SGM1\n", dims, 3);
    const long long count = dims[0] * dims[1] * dims[2];
    if (dims[0] > INT32_MAX || dims[1] > INT32_MAX || dims[2] > INT32_MAX || count > (1ll << 40))
        throw ValidationError("sgm: dimensions too large");
    const std::size_t payload = static_cast<std::size_t>(count) * 4;
    if (bytes.size() - offset < payload) throw ValidationError("sgm: truncated payload");
    if (bytes.size() - offset > payload) throw ValidationError("sgm: trailing bytes after payload");
    std::vector<float> values(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = std::bit_cast<float>(get_u32(bytes, offset + 4 * i));
        if (!std::isfinite(values[i])) throw ValidationError("sgm: non-finite value");
    }
    return ScoreGrid(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]), std::move(values));
}

std::string encode_lbm(const LabelMap& map) {
    if (map.height <= 0 || map.width <= 0 || map.values.size() != static_cast<std::size_t>(map.height) * map.width)
        throw ValidationError("lbm: inconsistent label map");
    std::string out = "LBM1\n" + std::to_string(map.height) + " " + std::to_string(map.width) + "\n";
    out.reserve(out.size() + map.values.size() * 4);
    for (std::uint32_t v : map.values) put_u32(out, v);
    return out;
}

LabelMap decode_lbm(std::string_view bytes) {
    std::vector<long long> dims;
    const std::size_t offset = parse_header(bytes, "LBM1\n", dims, 2);
    if (dims[0] > INT32_MAX || dims[1] > INT32_MAX || dims[0] * dims[1] > (1ll << 40))
        throw ValidationError("lbm: dimensions too large");
    const std::size_t count = static_cast<std::size_t>(dims[0] * dims[1]);
    if (bytes.size() - offset < count * 4) throw ValidationError("lbm: truncated payload");
    if (bytes.size() - offset > count * 4) throw ValidationError("lbm: trailing bytes after payload");
    LabelMap map{static_cast<int>(dims[0]), static_cast<int>(dims[1]), std::vector<std::uint32_t>(count)};
    for (std::size_t i = 0; i < count; ++i) map.values[i] = get_u32(bytes, offset + 4 * i);
    return map;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ValidationError("write failed: " + path.string());
}

void write_sgm(const std::filesystem::path& path, const ScoreGrid& grid) { write_file(path, encode_sgm(grid)); }
ScoreGrid read_sgm(const std::filesystem::path& path) { return decode_sgm(read_file(path)); }
void write_lbm(const std::filesystem::path& path, const LabelMap& map) { write_file(path, encode_lbm(map)); }
LabelMap read_lbm(const std::filesystem::path& path) { return decode_lbm(read_file(path)); }

std::uint32_t pack_instance(std::uint32_t instance_id, std::uint32_t label) {
    if (instance_id > kMaxInstanceId) throw ValidationError("instance id exceeds 24 bits");
    if (label > 255) throw ValidationError("class label exceeds 255");
    return (label << 24) | instance_id;
}

std::uint32_t unpacked_instance(std::uint32_t packed) { return packed & kMaxInstanceId; }
std::uint32_t unpacked_label(std::uint32_t packed) { return packed >> 24; }

LabelMap to_label_map(const InstanceMap& instances) {
    LabelMap map{instances.height, instances.width, std::vector<std::uint32_t>(instances.instance.size())};
    for (std::size_t p = 0; p < map.values.size(); ++p) map.values[p] = pack_instance(instances.instance[p], instances.label[p]);
    return map;
}

InstanceMap to_instance_map(const LabelMap& packed) {
    InstanceMap out;
    out.height = packed.height;
    out.width = packed.width;
    out.instance.resize(packed.values.size());
    out.label.resize(packed.values.size());
    for (std::size_t p = 0; p < packed.values.size(); ++p) {
        out.instance[p] = unpacked_instance(packed.values[p]);
        out.label[p] = static_cast<std::uint8_t>(unpacked_label(packed.values[p]));
    }
    return out;
}

LabelMap to_label_map(const SuperpixelMap& spx) {
    LabelMap map{spx.height(), spx.width(), std::vector<std::uint32_t>(spx.pixel_count())};
    for (std::size_t p = 0; p < map.values.size(); ++p) map.values[p] = static_cast<std::uint32_t>(spx.region_of(p));
    return map;
}

SuperpixelMap to_superpixel_map(const LabelMap& map) {
    std::vector<std::int32_t> regions(map.values.size());
    for (std::size_t p = 0; p < regions.size(); ++p) {
        if (map.values[p] > static_cast<std::uint32_t>(INT32_MAX)) throw ValidationError("superpixel id out of range");
        regions[p] = static_cast<std::int32_t>(map.values[p]);
    }
    return SuperpixelMap(map.height, map.width, std::move(regions));
}

InstanceIdMap to_instance_ids(const LabelMap& packed) {
    InstanceIdMap out{packed.height, packed.width, std::vector<std::uint32_t>(packed.values.size())};
    for (std::size_t p = 0; p < packed.values.size(); ++p) out.ids[p] = unpacked_instance(packed.values[p]);
    return out;
}

}  // namespace instancecut
