#pragma once

// Binary score-grid (.sgm) and label-map (.lbm) files.
//
//   .sgm  "SGM1\n" "H W C\n" then H*W*C float32 little-endian, pixel-major
//   .lbm  "LBM1\n" "H W\n"   then H*W uint32 little-endian, row-major
//
// Instance maps are stored in .lbm with the instance id in the low 24 bits
// and the class label in the high 8 bits.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "instancecut/groundtruth.hpp"
#include "instancecut/model.hpp"
#include "instancecut/objective.hpp"

namespace instancecut {

struct LabelMap {
    int height = 0;
    int width = 0;
    std::vector<std::uint32_t> values;

    friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

std::string encode_sgm(const ScoreGrid& grid);
ScoreGrid decode_sgm(std::string_view bytes);
void write_sgm(const std::filesystem::path& path, const ScoreGrid& grid);
ScoreGrid read_sgm(const std::filesystem::path& path);

std::string encode_lbm(const LabelMap& map);
LabelMap decode_lbm(std::string_view bytes);
void write_lbm(const std::filesystem::path& path, const LabelMap& map);
LabelMap read_lbm(const std::filesystem::path& path);

inline constexpr std::uint32_t kMaxInstanceId = (1u << 24) - 1;

std::uint32_t pack_instance(std::uint32_t instance_id, std::uint32_t label);
std::uint32_t unpacked_instance(std::uint32_t packed);
std::uint32_t unpacked_label(std::uint32_t packed);

LabelMap to_label_map(const InstanceMap& instances);
InstanceMap to_instance_map(const LabelMap& packed);
LabelMap to_label_map(const SuperpixelMap& spx);
SuperpixelMap to_superpixel_map(const LabelMap& map);
/// Instance ids (low 24 bits) of a packed map.
InstanceIdMap to_instance_ids(const LabelMap& packed);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace instancecut
