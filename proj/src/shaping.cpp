#include "megn/shaping.hpp"

#include <cmath>
#include <stdexcept>

namespace megn {

void ShapingScheme::validate() const {
    composition.validate();
    if (mapping_h != 1 && mapping_h != 2 && mapping_h != 4)
        throw std::invalid_argument("mapping H must be 1, 2 or 4");
    if (composition.blocklength() % 4 != 0)
        throw std::invalid_argument("blocklength must be a multiple of 4");
    if (power_w <= 0.0) throw std::invalid_argument("power must be positive");
}

double ShapingScheme::amplitude_scale() const {
    AmpMoments m = amplitude_moments(composition);
    return std::sqrt(power_w / (2.0 * m.e2));
}

AmplitudeComposition ShapingScheme::scaled_composition() const {
    return composition.scaled(amplitude_scale());
}

std::vector<double> generate_block(const AmplitudeComposition& comp, Rng& rng) {
    std::vector<double> block = comp.expanded();
    for (std::size_t i = block.size() - 1; i > 0; --i) {
        std::size_t j = rng.next_below(i + 1);
        std::swap(block[i], block[j]);
    }
    return block;
}

namespace {

inline double sign_of(Rng& rng) { return (rng.next_u64() & 1u) ? 1.0 : -1.0; }

}  // namespace

SymbolStream map_to_qam(const std::vector<std::vector<double>>& blocks, int mapping_h,
                        Rng& sign_rng) {
    if (mapping_h != 1 && mapping_h != 2 && mapping_h != 4)
        throw std::invalid_argument("mapping H must be 1, 2 or 4");
    const int blocks_per_group = 4 / mapping_h;
    if (blocks.empty() || blocks.size() % blocks_per_group != 0)
        throw std::invalid_argument("block count must be a multiple of 4/H");
    const std::size_t n = blocks.front().size();
    if (n % 4 != 0) throw std::invalid_argument("blocklength must be a multiple of 4");
    const std::size_t ms = n / mapping_h;

    SymbolStream out;
    out.mapping_h = mapping_h;
    out.block_len_symbols = static_cast<int>(ms);
    const std::size_t groups = blocks.size() / blocks_per_group;
    out.x_pol.reserve(groups * ms);
    out.y_pol.reserve(groups * ms);

    for (std::size_t g = 0; g < groups; ++g) {
        const std::vector<double>* b = &blocks[g * blocks_per_group];
        for (std::size_t w = 0; w < ms; ++w) {
            double xi, xq, yi, yq;
            switch (mapping_h) {
                case 1:
                    xi = b[0][w];
                    xq = b[1][w];
                    yi = b[2][w];
                    yq = b[3][w];
                    break;
                case 2:
                    xi = b[0][2 * w];
                    xq = b[0][2 * w + 1];
                    yi = b[1][2 * w];
                    yq = b[1][2 * w + 1];
                    break;
                default:
                    xi = b[0][4 * w];
                    xq = b[0][4 * w + 1];
                    yi = b[0][4 * w + 2];
                    yq = b[0][4 * w + 3];
                    break;
            }
            out.x_pol.emplace_back(sign_of(sign_rng) * xi, sign_of(sign_rng) * xq);
            out.y_pol.emplace_back(sign_of(sign_rng) * yi, sign_of(sign_rng) * yq);
        }
    }
    return out;
}

SymbolStream generate_stream(const ShapingScheme& scheme, std::size_t num_groups,
                             std::uint64_t seed) {
    scheme.validate();
    const AmplitudeComposition scaled = scheme.scaled_composition();
    const int blocks_per_group = 4 / scheme.mapping_h;
    const std::size_t ms = static_cast<std::size_t>(scheme.symbol_block_length());

    SymbolStream out;
    out.mapping_h = scheme.mapping_h;
    out.block_len_symbols = static_cast<int>(ms);
    out.seed = seed;
    out.x_pol.resize(num_groups * ms);
    out.y_pol.resize(num_groups * ms);

#pragma omp parallel for schedule(static)
    for (std::size_t g = 0; g < num_groups; ++g) {
        Rng rng(derive_seed(seed, g));
        std::vector<std::vector<double>> blocks(blocks_per_group);
        for (int b = 0; b < blocks_per_group; ++b) blocks[b] = generate_block(scaled, rng);
        SymbolStream chunk = map_to_qam(blocks, scheme.mapping_h, rng);
        std::copy(chunk.x_pol.begin(), chunk.x_pol.end(), out.x_pol.begin() + g * ms);
        std::copy(chunk.y_pol.begin(), chunk.y_pol.end(), out.y_pol.begin() + g * ms);
    }
    return out;
}

}  // namespace megn
