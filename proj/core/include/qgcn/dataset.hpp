#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "qgcn/model.hpp"

namespace qgcn {

class IdxParseError : public Error {
  public:
    enum class Kind { BadMagic, Truncated, CountMismatch, BadDimensions };

    IdxParseError(Kind kind, const std::string &message) : Error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

struct RawImage {
    std::array<std::uint8_t, 28 * 28> pixels{};
    std::uint8_t label = 0;
};

// IDX container layout: big-endian 32-bit header fields, magic 0x00000803
// for images (count, 28, 28), 0x00000801 for labels (count), then payload.
std::vector<RawImage> parse_idx(std::istream &images, std::istream &labels);
std::vector<RawImage> parse_idx_files(const std::string &images_path,
                                      const std::string &labels_path);

/// Zero-pads 28x28 to 32x32 (2 rows/cols each side), averages 4x4 blocks and
/// rescales to [0, 1].
std::array<double, 64> downsample_8x8(const RawImage &image);

/// Splits the 8x8 grid into quadrants numbered clockwise from the top-left:
/// 0 top-left, 1 top-right, 2 bottom-right, 3 bottom-left. Each patch is
/// flattened row-major to 16 values.
std::array<std::array<double, 16>, 4> patchify(const std::array<double, 64> &grid);

/// True when two patch ids are side-adjacent in the 2x2 layout; the
/// diagonals (0,2) and (1,3) are not.
bool patches_adjacent(int a, int b);

/// Graph over three selected patches. Node order follows ascending patch id;
/// edges connect side-adjacent patches.
Graph build_graph(const std::array<int, 3> &patch_ids,
                  const std::array<std::array<double, 16>, 4> &patches);

struct Sample {
    Graph graph;
    int label = 0; // +1 or -1
    std::uint32_t source_index = 0;
};

struct SampleSet {
    std::vector<Sample> samples;
    std::array<int, 3> node_selection{};
    std::uint64_t seed = 0;
    int positive_digit = 3;
    int negative_digit = 6;
};

struct SampleSetConfig {
    std::array<int, 3> node_selection{0, 2, 3};
    std::uint64_t seed = 0;
    int train_size = 480;
    int test_size = 120;
    int positive_digit = 3; // label +1
    int negative_digit = 6; // label -1
    bool balanced = true;
};

/// Seeded selection without replacement from the raw pool; train and test
/// are disjoint. With `balanced`, each split holds equally many samples of
/// both digits.
std::pair<SampleSet, SampleSet> build_sampleset(const std::vector<RawImage> &raw,
                                                const SampleSetConfig &config);

} // namespace qgcn
