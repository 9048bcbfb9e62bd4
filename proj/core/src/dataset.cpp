#include "qgcn/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>

namespace qgcn {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be32(std::istream &in, const char *what) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char *>(buf), 4);
    if (!in) {
        throw IdxParseError(IdxParseError::Kind::Truncated,
                            std::string("truncated IDX header while reading ") + what);
    }
    return (std::uint32_t{buf[0]} << 24) | (std::uint32_t{buf[1]} << 16) |
           (std::uint32_t{buf[2]} << 8) | std::uint32_t{buf[3]};
}

} // namespace

std::vector<RawImage> parse_idx(std::istream &images, std::istream &labels) {
    const std::uint32_t image_magic = read_be32(images, "image magic");
    if (image_magic != kImagesMagic) {
        throw IdxParseError(IdxParseError::Kind::BadMagic,
                            "bad image magic 0x" + std::to_string(image_magic) +
                                " at offset 0 (want 2051)");
    }
    const std::uint32_t n_images = read_be32(images, "image count");
    const std::uint32_t rows = read_be32(images, "row count");
    const std::uint32_t cols = read_be32(images, "column count");
    if (rows != 28 || cols != 28) {
        throw IdxParseError(IdxParseError::Kind::BadDimensions,
                            "expected 28x28 images, got " + std::to_string(rows) + "x" +
                                std::to_string(cols));
    }

    const std::uint32_t label_magic = read_be32(labels, "label magic");
    if (label_magic != kLabelsMagic) {
        throw IdxParseError(IdxParseError::Kind::BadMagic,
                            "bad label magic 0x" + std::to_string(label_magic) +
                                " at offset 0 (want 2049)");
    }
    const std::uint32_t n_labels = read_be32(labels, "label count");
    if (n_images != n_labels) {
        throw IdxParseError(IdxParseError::Kind::CountMismatch,
                            "image count " + std::to_string(n_images) +
                                " does not match label count " + std::to_string(n_labels));
    }

    std::vector<RawImage> out(n_images);
    for (std::uint32_t i = 0; i < n_images; ++i) {
        images.read(reinterpret_cast<char *>(out[i].pixels.data()),
                    static_cast<std::streamsize>(out[i].pixels.size()));
        if (!images) {
            throw IdxParseError(IdxParseError::Kind::Truncated,
                                "truncated image payload at image " + std::to_string(i) +
                                    " (offset " + std::to_string(16 + i * 784) + ")");
        }
        char label = 0;
        labels.read(&label, 1);
        if (!labels) {
            throw IdxParseError(IdxParseError::Kind::Truncated,
                                "truncated label payload at label " + std::to_string(i) +
                                    " (offset " + std::to_string(8 + i) + ")");
        }
        out[i].label = static_cast<std::uint8_t>(label);
        if (out[i].label > 9) {
            throw IdxParseError(IdxParseError::Kind::BadDimensions,
                                "label " + std::to_string(out[i].label) + " out of range");
        }
    }
    return out;
}

std::vector<RawImage> parse_idx_files(const std::string &images_path,
                                      const std::string &labels_path) {
    std::ifstream images(images_path, std::ios::binary);
    if (!images) {
        throw Error("cannot open images file: " + images_path);
    }
    std::ifstream labels(labels_path, std::ios::binary);
    if (!labels) {
        throw Error("cannot open labels file: " + labels_path);
    }
    return parse_idx(images, labels);
}

std::array<double, 64> downsample_8x8(const RawImage &image) {
    std::array<double, 64> grid{};
    for (int by = 0; by < 8; ++by) {
        for (int bx = 0; bx < 8; ++bx) {
            double sum = 0.0;
            for (int dy = 0; dy < 4; ++dy) {
                for (int dx = 0; dx < 4; ++dx) {
                    // Padded 32x32 coordinates; the source sits at (2, 2).
                    const int y = by * 4 + dy - 2;
                    const int x = bx * 4 + dx - 2;
                    if (y >= 0 && y < 28 && x >= 0 && x < 28) {
                        sum += image.pixels[y * 28 + x];
                    }
                }
            }
            grid[by * 8 + bx] = sum / 16.0 / 255.0;
        }
    }
    return grid;
}

std::array<std::array<double, 16>, 4> patchify(const std::array<double, 64> &grid) {
    // Quadrant origins, clockwise from the top-left.
    static constexpr int origin[4][2] = {{0, 0}, {0, 4}, {4, 4}, {4, 0}};
    std::array<std::array<double, 16>, 4> patches{};
    for (int p = 0; p < 4; ++p) {
        for (int y = 0; y < 4; ++y) {
            for (int x = 0; x < 4; ++x) {
                patches[p][y * 4 + x] = grid[(origin[p][0] + y) * 8 + origin[p][1] + x];
            }
        }
    }
    return patches;
}

bool patches_adjacent(int a, int b) {
    if (a == b) {
        return false;
    }
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    return hi - lo == 1 || (lo == 0 && hi == 3);
}

Graph build_graph(const std::array<int, 3> &patch_ids,
                  const std::array<std::array<double, 16>, 4> &patches) {
    std::array<int, 3> ids = patch_ids;
    std::sort(ids.begin(), ids.end());
    if (ids[0] == ids[1] || ids[1] == ids[2]) {
        throw Error("duplicate patch ids");
    }
    if (ids[0] < 0 || ids[2] > 3) {
        throw Error("patch ids must be in 0..3");
    }
    Graph g;
    for (int id : ids) {
        g.node_features.emplace_back(patches[id].begin(), patches[id].end());
        g.node_ids.push_back(id);
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (patches_adjacent(ids[i], ids[j])) {
                g.edges.insert({i, j});
            }
        }
    }
    return g;
}

std::pair<SampleSet, SampleSet> build_sampleset(const std::vector<RawImage> &raw,
                                                const SampleSetConfig &config) {
    std::vector<std::uint32_t> positives;
    std::vector<std::uint32_t> negatives;
    for (std::uint32_t i = 0; i < raw.size(); ++i) {
        if (raw[i].label == config.positive_digit) {
            positives.push_back(i);
        } else if (raw[i].label == config.negative_digit) {
            negatives.push_back(i);
        }
    }

    std::mt19937_64 rng(config.seed);
    std::shuffle(positives.begin(), positives.end(), rng);
    std::shuffle(negatives.begin(), negatives.end(), rng);

    const auto make_set = [&](std::span<const std::uint32_t> pos,
                              std::span<const std::uint32_t> neg) {
        SampleSet set;
        set.node_selection = config.node_selection;
        set.seed = config.seed;
        set.positive_digit = config.positive_digit;
        set.negative_digit = config.negative_digit;
        std::vector<std::pair<std::uint32_t, int>> entries;
        for (auto i : pos) {
            entries.emplace_back(i, 1);
        }
        for (auto i : neg) {
            entries.emplace_back(i, -1);
        }
        // Interleave the two classes deterministically.
        std::shuffle(entries.begin(), entries.end(), rng);
        for (auto [idx, label] : entries) {
            const auto patches = patchify(downsample_8x8(raw[idx]));
            Sample s;
            s.graph = build_graph(config.node_selection, patches);
            s.label = label;
            s.source_index = idx;
            set.samples.push_back(std::move(s));
        }
        return set;
    };

    if (config.balanced) {
        const std::size_t train_half = config.train_size / 2;
        const std::size_t test_half = config.test_size / 2;
        if (config.train_size % 2 != 0 || config.test_size % 2 != 0) {
            throw Error("balanced splits need even train/test sizes");
        }
        if (positives.size() < train_half + test_half ||
            negatives.size() < train_half + test_half) {
            throw Error("insufficient source samples: need " +
                        std::to_string(train_half + test_half) + " per digit, have " +
                        std::to_string(positives.size()) + " / " +
                        std::to_string(negatives.size()));
        }
        auto train = make_set({positives.data(), train_half}, {negatives.data(), train_half});
        auto test = make_set({positives.data() + train_half, test_half},
                             {negatives.data() + train_half, test_half});
        return {std::move(train), std::move(test)};
    }

    std::vector<std::uint32_t> pool;
    pool.insert(pool.end(), positives.begin(), positives.end());
    pool.insert(pool.end(), negatives.begin(), negatives.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t need = static_cast<std::size_t>(config.train_size) + config.test_size;
    if (pool.size() < need) {
        throw Error("insufficient source samples: need " + std::to_string(need) +
                    ", have " + std::to_string(pool.size()));
    }
    const auto labelled = [&](std::span<const std::uint32_t> idx) {
        std::vector<std::uint32_t> pos;
        std::vector<std::uint32_t> neg;
        for (auto i : idx) {
            (raw[i].label == config.positive_digit ? pos : neg).push_back(i);
        }
        return std::make_pair(pos, neg);
    };
    auto [train_pos, train_neg] =
        labelled({pool.data(), static_cast<std::size_t>(config.train_size)});
    auto [test_pos, test_neg] = labelled(
        {pool.data() + config.train_size, static_cast<std::size_t>(config.test_size)});
    auto train = make_set(train_pos, train_neg);
    auto test = make_set(test_pos, test_neg);
    return {std::move(train), std::move(test)};
}

} // namespace qgcn
