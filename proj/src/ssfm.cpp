#include "megn/ssfm.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "megn/fft.hpp"

namespace megn {

void SimConfig::validate(const LinkConfig& link) const {
    if (oversampling < 2) throw std::invalid_argument("oversampling must be >= 2");
    if (step_km <= 0.0) throw std::invalid_argument("step_km must be positive");
    if (num_symbols < 16) throw std::invalid_argument("num_symbols too small");
    if (num_runs < 1) throw std::invalid_argument("num_runs must be >= 1");
    if (guard_symbols < 0 || 2 * static_cast<std::size_t>(guard_symbols) >= num_symbols)
        throw std::invalid_argument("guard interval leaves no symbols");
    const double steps = link.span_length_km / step_km;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
        throw std::invalid_argument("step_km must divide span_length_km");
}

int SimConfig::steps_per_span(const LinkConfig& link) const {
    return static_cast<int>(std::llround(link.span_length_km / step_km));
}

double Waveform::mean_power_x() const {
    double acc = 0.0;
    for (const cplx& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

double Waveform::mean_power_y() const {
    double acc = 0.0;
    for (const cplx& v : y) acc += std::norm(v);
    return acc / static_cast<double>(y.size());
}

namespace {

// Frequency of FFT bin k at sample rate fs (standard wrap-around order).
inline double bin_freq(std::size_t k, std::size_t n, double fs) {
    const double kk = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    return kk * fs / static_cast<double>(n);
}

}  // namespace

Waveform transmit(const SymbolStream& stream, const SimConfig& sim, const PulseShape& pulse) {
    pulse.validate();
    const std::size_t nsym = stream.size();
    if (nsym == 0) throw std::invalid_argument("empty symbol stream");
    const std::size_t nsamp = nsym * static_cast<std::size_t>(sim.oversampling);
    const double rs = pulse.symbol_rate_hz;
    const double fs = rs * sim.oversampling;

    Fft fft_sym(nsym);
    Fft fft_full(nsamp);

    Waveform w;
    w.sample_rate_hz = fs;
    // The symbol spectrum is periodic with period Rs; the pulse spectrum
    // selects (1+rolloff)Rs/2 of it. Scaling o*Rs makes the mean waveform
    // power equal E|a|^2 under the unit-energy pulse normalization.
    const double scale = sim.oversampling * rs;
    const double dfreq = rs / static_cast<double>(nsym);
    for (const std::vector<cplx>* pol : {&stream.x_pol, &stream.y_pol}) {
        std::vector<cplx> sym(*pol);
        fft_sym.forward(sym);
        std::vector<cplx> spec(nsamp, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < nsamp; ++k) {
            const double f = bin_freq(k, nsamp, fs);
            const double s = pulse.spectrum(f);
            if (s == 0.0) continue;
            // fold the symbol spectrum periodically onto this bin
            const long m = static_cast<long>(std::llround(f / dfreq));
            const std::size_t idx = static_cast<std::size_t>(((m % static_cast<long>(nsym)) +
                                                              static_cast<long>(nsym)) %
                                                             static_cast<long>(nsym));
            spec[k] = scale * s * sym[idx];
        }
        fft_full.inverse(spec);
        if (pol == &stream.x_pol)
            w.x = std::move(spec);
        else
            w.y = std::move(spec);
    }
    return w;
}

void propagate_span(Waveform& wave, const LinkConfig& link, const SimConfig& sim) {
    link.validate_for_eval();
    const std::size_t n = wave.x.size();
    if (n == 0 || wave.y.size() != n) throw std::invalid_argument("bad waveform");
    const int steps = sim.steps_per_span(link);
    const double h = sim.step_km * 1e3;
    const double alpha = link.alpha_np_per_m();  // field coefficient
    const double beta2 = link.beta2_s2_per_m();
    const double gamma_eff = 8.0 / 9.0 * link.gamma_per_w_m();  // Manakov factor

    Fft fft(n);

    // linear operator over length L: exp(-alpha L + j 2 pi^2 beta2 f^2 L)
    auto linear_filter = [&](double length) {
        std::vector<cplx> filt(n);
        const double att = std::exp(-alpha * length);
        for (std::size_t k = 0; k < n; ++k) {
            const double f = bin_freq(k, n, wave.sample_rate_hz);
            filt[k] = att * std::polar(1.0, 2.0 * pi * pi * beta2 * f * f * length);
        }
        return filt;
    };
    auto apply_linear = [&](const std::vector<cplx>& filt) {
        for (std::vector<cplx>* pol : {&wave.x, &wave.y}) {
            fft.forward(*pol);
            for (std::size_t k = 0; k < n; ++k) (*pol)[k] *= filt[k];
            fft.inverse(*pol);
        }
    };

    const std::vector<cplx> half = linear_filter(0.5 * h);
    const std::vector<cplx> full = linear_filter(h);

    apply_linear(half);
    for (int s = 0; s < steps; ++s) {
        for (std::size_t k = 0; k < n; ++k) {
            const double p = std::norm(wave.x[k]) + std::norm(wave.y[k]);
            const cplx rot = std::polar(1.0, gamma_eff * p * h);
            wave.x[k] *= rot;
            wave.y[k] *= rot;
        }
        if (!std::isfinite(std::norm(wave.x[0]) + std::norm(wave.y[0])))
            throw std::runtime_error("split-step overflow at step " + std::to_string(s));
        apply_linear(s + 1 == steps ? half : full);
    }
}

void amplify(Waveform& wave, const LinkConfig& link, const SimConfig& sim, Rng& rng) {
    const double gain_field = std::exp(link.alpha_np_per_m() * link.span_length_m());
    for (std::vector<cplx>* pol : {&wave.x, &wave.y})
        for (cplx& v : *pol) v *= gain_field;
    if (!sim.ase_enabled) return;

    const double gain_pow = link.span_gain_linear();
    const double nf = db_to_linear(link.edfa_noise_figure_db);
    const double psd = (gain_pow - 1.0) * nf / 2.0 * planck_J_s * link.carrier_freq_hz();
    const double sigma = std::sqrt(psd * wave.sample_rate_hz / 2.0);  // per quadrature
    for (std::vector<cplx>* pol : {&wave.x, &wave.y})
        for (cplx& v : *pol) v += cplx(sigma * rng.next_gaussian(), sigma * rng.next_gaussian());
}

ReceiveResult receive(const Waveform& wave, const SymbolStream& stream, const LinkConfig& link,
                      const SimConfig& sim, const PulseShape& pulse) {
    const std::size_t nsym = stream.size();
    const std::size_t nsamp = wave.x.size();
    if (nsamp != nsym * static_cast<std::size_t>(sim.oversampling))
        throw std::invalid_argument("waveform/stream length mismatch");

    // warn when the dispersive spread exceeds the configured guard
    const double spread_s = std::abs(link.beta2_s2_per_m()) * 2.0 * pi * pulse.max_freq_hz() *
                            link.span_length_m() * link.num_spans;
    const double spread_symbols = spread_s * pulse.symbol_rate_hz;
    if (spread_symbols > sim.guard_symbols)
        std::fprintf(stderr,
                     "receive: dispersive spread ~%.0f symbols exceeds guard of %d symbols\n",
                     spread_symbols, sim.guard_symbols);

    Fft fft_full(nsamp);
    Fft fft_sym(nsym);
    const double beta2 = link.beta2_s2_per_m();
    const double l_total = link.span_length_m() * link.num_spans;

    ReceiveResult out;
    for (int polidx = 0; polidx < 2; ++polidx) {
        const std::vector<cplx>& rx = polidx == 0 ? wave.x : wave.y;
        const std::vector<cplx>& ref = polidx == 0 ? stream.x_pol : stream.y_pol;

        std::vector<cplx> spec(rx);
        fft_full.forward(spec);
        for (std::size_t k = 0; k < nsamp; ++k) {
            const double f = bin_freq(k, nsamp, wave.sample_rate_hz);
            // exact inverse dispersion, then matched filter
            spec[k] *= std::polar(1.0, -2.0 * pi * pi * beta2 * f * f * l_total);
            spec[k] *= pulse.spectrum(f);
        }
        // fold to the symbol rate (alias sum == decimation of the filtered wave)
        std::vector<cplx> folded(nsym, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < nsamp; ++k) folded[k % nsym] += spec[k];
        fft_sym.inverse(folded);

        // data-aided complex gain
        cplx num(0.0, 0.0);
        double den = 0.0;
        for (std::size_t i = 0; i < nsym; ++i) {
            num += folded[i] * std::conj(ref[i]);
            den += std::norm(ref[i]);
        }
        const cplx c = num / den;

        std::vector<cplx>& err = polidx == 0 ? out.err_x : out.err_y;
        const std::size_t lo = static_cast<std::size_t>(sim.guard_symbols);
        const std::size_t hi = nsym - static_cast<std::size_t>(sim.guard_symbols);
        err.reserve(hi - lo);
        double perr = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            cplx e = folded[i] / c - ref[i];
            err.push_back(e);
            perr += std::norm(e);
        }
        perr /= static_cast<double>(hi - lo);
        if (polidx == 0) {
            out.err_power_x = perr;
            out.gain_x = c;
        } else {
            out.err_power_y = perr;
            out.gain_y = c;
        }
    }
    return out;
}

EtaSimResult estimate_eta_sim(const ShapingScheme& scheme, const LinkConfig& link,
                              const SimConfig& sim, const PulseShape& pulse) {
    scheme.validate();
    link.validate_for_eval();
    sim.validate(link);
    if (sim.ase_enabled)
        throw std::invalid_argument("eta estimation requires ASE disabled (NLI isolation)");

    ShapingScheme run_scheme = scheme;
    run_scheme.power_w = sim.launch_power_w();
    const double p_ch = run_scheme.power_w;
    const std::size_t ms = static_cast<std::size_t>(run_scheme.symbol_block_length());
    const std::size_t groups = (sim.num_symbols + ms - 1) / ms;

    EtaSimResult out;
    out.per_run_eta.resize(sim.num_runs);
    out.per_run_err_power_x.resize(sim.num_runs);
    out.per_run_err_power_y.resize(sim.num_runs);
    out.per_run_seed.resize(sim.num_runs);

#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < sim.num_runs; ++r) {
        const std::uint64_t run_seed = derive_seed(sim.seed, static_cast<std::uint64_t>(r));
        SymbolStream stream = generate_stream(run_scheme, groups, run_seed);
        stream.x_pol.resize(sim.num_symbols);
        stream.y_pol.resize(sim.num_symbols);

        Waveform wave = transmit(stream, sim, pulse);
        Rng amp_rng(derive_seed(run_seed, 0x0a5e));
        for (int span = 0; span < link.num_spans; ++span) {
            propagate_span(wave, link, sim);
            amplify(wave, link, sim, amp_rng);
        }
        ReceiveResult rx = receive(wave, stream, link, sim, pulse);
        out.per_run_eta[r] = 0.5 * (rx.err_power_x + rx.err_power_y) / (p_ch * p_ch * p_ch);
        out.per_run_err_power_x[r] = rx.err_power_x;
        out.per_run_err_power_y[r] = rx.err_power_y;
        out.per_run_seed[r] = run_seed;
    }

    double mean = 0.0;
    for (double v : out.per_run_eta) mean += v;
    mean /= sim.num_runs;
    out.eta = mean;
    if (sim.num_runs >= 2) {
        double var = 0.0;
        for (double v : out.per_run_eta) var += (v - mean) * (v - mean);
        out.stderr_ = std::sqrt(var / (sim.num_runs * (sim.num_runs - 1.0)));
    }
    return out;
}

}  // namespace megn
