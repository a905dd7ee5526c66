#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <random>

#include "instancecut/io.hpp"
#include "oracles.hpp"

using namespace instancecut;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("instancecut_test_" + name);
}

ScoreGrid random_grid(std::mt19937_64& rng) {
    const int h = oracle::uniform_int(rng, 1, 20), w = oracle::uniform_int(rng, 1, 20), c = oracle::uniform_int(rng, 1, 9);
    std::vector<float> v(static_cast<std::size_t>(h) * w * c);
    // Arbitrary finite bit patterns, including subnormals and negative zero.
    for (float& x : v) {
        do {
            x = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
        } while (!std::isfinite(x));
    }
    return ScoreGrid(h, w, c, std::move(v));
}

bool bit_equal(const ScoreGrid& a, const ScoreGrid& b) {
    return a.height() == b.height() && a.width() == b.width() && a.channels() == b.channels() &&
           std::memcmp(a.values().data(), b.values().data(), a.values().size() * sizeof(float)) == 0;
}

}  // namespace

TEST(Sgm, MinimalFile) {
    const std::string bytes = encode_sgm(ScoreGrid(1, 1, 1, {0.0f}));
    EXPECT_EQ(bytes, std::string("SGM1\n1 1 1\n\0\0\0\0", 15));
    EXPECT_EQ(bytes.size(), 15u);
}

TEST(Sgm, LittleEndianPayload) {
    const std::string bytes = encode_sgm(ScoreGrid(1, 1, 1, {1.0f}));
    EXPECT_EQ(bytes.substr(11), std::string("\x00\x00\x80\x3f", 4));
}

TEST(Sgm, RoundTripIsBitExact) {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 30; ++i) {
        const ScoreGrid g = random_grid(rng);
        EXPECT_TRUE(bit_equal(decode_sgm(encode_sgm(g)), g));
    }
    const ScoreGrid g = random_grid(rng);
    const auto path = temp_path("roundtrip.sgm");
    write_sgm(path, g);
    EXPECT_TRUE(bit_equal(read_sgm(path), g));
    std::filesystem::remove(path);
}

TEST(Sgm, PayloadLengthEnforced) {
    const std::string header = "SGM1\n2 3 9\n";
    EXPECT_NO_THROW(decode_sgm(header + std::string(216, '\0')));
    EXPECT_THROW(decode_sgm(header + std::string(215, '\0')), ValidationError);
    EXPECT_THROW(decode_sgm(header + std::string(217, '\0')), ValidationError);
}

TEST(Sgm, MalformedInputs) {
    EXPECT_THROW(decode_sgm("SGM2\n1 1 1\n" + std::string(4, '\0')), ValidationError);
    EXPECT_THROW(decode_sgm("SGM1\n1 1\n" + std::string(4, '\0')), ValidationError);
    EXPECT_THROW(decode_sgm("SGM1\n1 1 x\n" + std::string(4, '\0')), ValidationError);
    EXPECT_THROW(decode_sgm("SGM1\n0 1 1\n"), ValidationError);
    EXPECT_THROW(decode_sgm("SGM1\n1 1 1"), ValidationError);
    EXPECT_THROW(decode_sgm(std::string("SGM1\n1 1 1\n\x00\x00\xc0\x7f", 15)), ValidationError);
    EXPECT_THROW(decode_sgm(""), ValidationError);
    EXPECT_THROW(read_sgm(temp_path("does_not_exist.sgm")), ValidationError);
}

TEST(Lbm, MinimalFile) {
    const std::string bytes = encode_lbm(LabelMap{1, 1, {0}});
    EXPECT_EQ(bytes, std::string("LBM1\n1 1\n\0\0\0\0", 13));
}

TEST(Lbm, RoundTrip) {
    std::mt19937_64 rng(62);
    for (int i = 0; i < 30; ++i) {
        LabelMap m{oracle::uniform_int(rng, 1, 30), oracle::uniform_int(rng, 1, 30), {}};
        m.values.resize(static_cast<std::size_t>(m.height) * m.width);
        for (auto& v : m.values) v = static_cast<std::uint32_t>(rng());
        EXPECT_EQ(decode_lbm(encode_lbm(m)), m);
    }
    EXPECT_THROW(decode_lbm("LBM1\n1 2\n" + std::string(4, '\0')), ValidationError);
}

TEST(Lbm, PackUnpackInverse) {
    std::mt19937_64 rng(63);
    for (int i = 0; i < 1000; ++i) {
        const std::uint32_t id = static_cast<std::uint32_t>(rng()) & kMaxInstanceId;
        const std::uint32_t label = static_cast<std::uint32_t>(rng()) & 0xffu;
        const std::uint32_t packed = pack_instance(id, label);
        EXPECT_EQ(unpacked_instance(packed), id);
        EXPECT_EQ(unpacked_label(packed), label);
        EXPECT_EQ(pack_instance(unpacked_instance(packed), unpacked_label(packed)), packed);
    }
    EXPECT_THROW(pack_instance(kMaxInstanceId + 1, 0), ValidationError);
    EXPECT_THROW(pack_instance(1, 256), ValidationError);
}

TEST(Lbm, InstanceAndSuperpixelConversions) {
    InstanceMap inst{2, 2, {0, 1, 1, 2}, {0, 3, 3, 7}};
    EXPECT_EQ(to_instance_map(to_label_map(inst)), inst);
    const InstanceIdMap ids = to_instance_ids(to_label_map(inst));
    EXPECT_EQ(ids.ids, inst.instance);

    const SuperpixelMap spx(2, 2, {0, 0, 1, 1});
    EXPECT_EQ(to_superpixel_map(to_label_map(spx)), spx);
    EXPECT_THROW(to_superpixel_map(LabelMap{1, 2, {0, 0x80000000u}}), ValidationError);
}
