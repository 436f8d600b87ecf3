#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bandspec/band_model.hpp"
#include "bandspec/chebyshev.hpp"
#include "bandspec/cli.hpp"
#include "bandspec/diagrams.hpp"
#include "bandspec/errors.hpp"
#include "bandspec/fourier_emb.hpp"
#include "bandspec/path_oracle.hpp"
#include "bandspec/regularizer.hpp"
#include "bandspec/spectral_estimator.hpp"
#include "bandspec/verify.hpp"

namespace py = pybind11;
using namespace bandspec;

namespace {

// Big integers cross the boundary as Python ints via their decimal text.
py::int_ to_py(const BigInt& v) { return py::int_(py::str(v.str())); }

py::list to_py(const std::vector<BigInt>& v) {
    py::list out;
    for (const auto& x : v) out.append(to_py(x));
    return out;
}

MultiGraph graph_from(int vertices, const std::vector<std::pair<int, int>>& edges) {
    return MultiGraph{vertices, edges};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Random band matrices: moments, path counts, smooth kernels, Fourier embeddings";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);

    m.def(
        "band_matrix",
        [](int W, int N, std::uint64_t seed) {
            const auto h = sample_matrix(BandMatrixSpec::make(W, N, seed));
            const int D = 2 * N + 1;
            std::vector<std::vector<double>> rows(D, std::vector<double>(D, 0.0));
            for (int u = -N; u <= N; ++u)
                for (int v = std::max(-N, u - W); v <= std::min(N, u + W); ++v) rows[u + N][v + N] = h.entry(u, v);
            return rows;
        },
        py::arg("W"), py::arg("N"), py::arg("seed") = 0, "Dense (2N+1)x(2N+1) realization, rows indexed by u + N.");

    py::class_<MomentSeries>(m, "MomentSeries")
        .def_readonly("W", &MomentSeries::W)
        .def_readonly("max_degree", &MomentSeries::max_degree)
        .def_readonly("values", &MomentSeries::values)
        .def_readonly("std_errors", &MomentSeries::std_errors)
        .def_readonly("sample_count", &MomentSeries::sample_count);

    m.def(
        "estimate_moments",
        [](int W, int n_max, long samples, std::uint64_t seed, const std::string& kind, int N, int workers) {
            MomentOptions opt;
            opt.workers = workers;
            if (N == 0) N = truncation_radius_for_degree(n_max, W);
            return estimate_moments(BandMatrixSpec::make(W, N, seed), poly_kind_from_string(kind), n_max, samples,
                                    opt);
        },
        py::arg("W"), py::arg("n_max"), py::arg("samples"), py::arg("seed") = 0, py::arg("kind") = "T",
        py::arg("N") = 0, py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

    m.def(
        "path_counts",
        [](int W, int max_length) {
            const auto t = build_table(W, max_length);
            py::dict d;
            d["paths"] = to_py(t.paths);
            py::list p0;
            for (int n = 0; n <= max_length; ++n) p0.append(to_py(t.paths0_at(n)));
            d["paths0"] = p0;
            return d;
        },
        py::arg("W"), py::arg("max_length"), "Paths_n(0,0) and Paths0_n for n = 0..max_length.");
    m.def(
        "count_paths",
        [](int W, int n, int u0, int un, bool strengthened) {
            return to_py(count_paths(W, n, u0, un, strengthened ? PathKind::strengthened : PathKind::plain));
        },
        py::arg("W"), py::arg("n"), py::arg("u0") = 0, py::arg("un") = 0, py::arg("strengthened") = false);

    py::class_<KernelParams>(m, "KernelParams")
        .def(py::init([](int q, double epsilon, double eta) { return KernelParams::make(q, epsilon, eta); }),
             py::arg("q") = 2, py::arg("epsilon") = 0.05, py::arg("eta") = 0.5)
        .def_readonly("q", &KernelParams::q)
        .def_readonly("epsilon", &KernelParams::epsilon)
        .def_readonly("eta", &KernelParams::eta)
        .def_readonly("A_q", &KernelParams::A_q)
        .def("regime_warnings", &KernelParams::regime_warnings);

    m.def("phi", &phi_q, py::arg("params"), py::arg("t"));
    m.def("F", py::overload_cast<const KernelParams&, cplx>(&F_q), py::arg("params"), py::arg("xi"));
    m.def("phi_hat", py::overload_cast<const KernelParams&, cplx>(&phi_hat), py::arg("params"), py::arg("xi"));
    m.def(
        "delta_kernel",
        [](const KernelParams& p, double E0, double E) { return delta_kernel_eval(DeltaKernel::make(E0, p), E); },
        py::arg("params"), py::arg("E0"), py::arg("E"));
    m.def(
        "poisson_sides",
        [](const KernelParams& p, double E0, double theta) {
            const auto k = DeltaKernel::make(E0, p);
            return std::make_pair(poisson_lhs(k, theta), poisson_rhs(k, theta));
        },
        py::arg("params"), py::arg("E0"), py::arg("theta"));
    m.def(
        "simplex_moment_sum", [](const std::vector<cplx>& z, int n) { return simplex_moment_sum(z, n); },
        py::arg("z"), py::arg("n"));
    m.def(
        "S_eps", [](const KernelParams& p, cplx z, int j) { return S_eps(p, z, j); }, py::arg("params"),
        py::arg("z"), py::arg("j") = 0);

    m.def("semicircle_stieltjes", &semicircle_stieltjes, py::arg("E0"), py::arg("epsilon"));
    m.def(
        "avg_resolvent_im",
        [](int W, double E0, double epsilon, long samples, std::uint64_t seed, int N, int workers) {
            ResolventQuery q;
            q.W = W;
            q.E0 = E0;
            q.epsilon = epsilon;
            q.samples = samples;
            q.seed = seed;
            q.N = N;
            q.workers = workers;
            const auto r = avg_resolvent_im(q);
            return py::make_tuple(r.mean, r.std_error, r.N);
        },
        py::arg("W"), py::arg("E0"), py::arg("epsilon"), py::arg("samples") = 100, py::arg("seed") = 0,
        py::arg("N") = 0, py::arg("workers") = 1, "(mean, std_error, N) of Im G(0,0) at E0 + i epsilon.");
    m.def(
        "theorem_error",
        [](int W, double E0, double epsilon, long samples, std::uint64_t seed, int workers) {
            const auto r = theorem_error(W, E0, epsilon, samples, seed, workers);
            py::dict d;
            d["error"] = r.error;
            d["std_error"] = r.std_error;
            d["estimate"] = r.estimate;
            d["reference"] = r.reference;
            d["N"] = r.N;
            return d;
        },
        py::arg("W"), py::arg("E0"), py::arg("epsilon"), py::arg("samples") = 400, py::arg("seed") = 0,
        py::arg("workers") = 1);
    m.def(
        "dos_bracket",
        [](int W, double E0, const KernelParams& p, long samples, std::uint64_t seed, int workers) {
            const int n0 = kernel_cutoff_degree(W, p);
            MomentOptions opt;
            opt.workers = workers;
            opt.keep_samples = true;
            const auto mom = estimate_moments(BandMatrixSpec::make(W, truncation_radius_for_degree(n0, W), seed),
                                              PolyKind::T, n0, samples, opt);
            const auto r = dos_from_moments(mom, p, E0);
            py::dict d;
            d["value"] = r.value;
            d["std_error"] = r.std_error;
            d["dos"] = r.dos;
            d["n_used"] = r.n_used;
            return d;
        },
        py::arg("W"), py::arg("E0"), py::arg("params"), py::arg("samples") = 200, py::arg("seed") = 0,
        py::arg("workers") = 1);

    m.def("w", &w_eval, py::arg("W"), py::arg("xi"));
    m.def("w_sum", &w_eval_sum, py::arg("W"), py::arg("xi"));
    m.def(
        "w_bound_constant", [](const std::vector<int>& Ws, int grid) { return w_bound_constant(Ws, grid); },
        py::arg("W_list"), py::arg("grid") = 100000);
    m.def(
        "emb_sharp",
        [](int vertices, const std::vector<std::pair<int, int>>& edges, int W, cplx g, const KernelParams& p) {
            EmbQuery q;
            q.graph = graph_from(vertices, edges);
            q.W = W;
            q.g = g;
            q.params = p;
            return emb_sharp(q).value;
        },
        py::arg("vertices"), py::arg("edges"), py::arg("W"), py::arg("g"), py::arg("params"));
    m.def(
        "emb_lattice_sum",
        [](int vertices, const std::vector<std::pair<int, int>>& edges, int W, cplx g, const KernelParams& p) {
            EmbQuery q;
            q.graph = graph_from(vertices, edges);
            q.W = W;
            q.g = g;
            q.params = p;
            return emb_lattice_sum(q);
        },
        py::arg("vertices"), py::arg("edges"), py::arg("W"), py::arg("g"), py::arg("params"));
    m.def(
        "kirchhoff_dimension",
        [](int vertices, const std::vector<std::pair<int, int>>& edges) {
            return kirchhoff_basis(graph_from(vertices, edges)).dimension();
        },
        py::arg("vertices"), py::arg("edges"));

    m.def(
        "diagram_census",
        [](int W, int max_length, bool strengthened) {
            const auto c = diagram_census(W, max_length, strengthened ? PathKind::strengthened : PathKind::plain);
            return to_json(c).dump();
        },
        py::arg("W"), py::arg("max_length"), py::arg("strengthened") = true, "Census as a JSON string.");

    m.def(
        "verify",
        [](bool fast) {
            std::vector<std::tuple<std::string, bool, std::string>> out;
            for (const auto& c : run_verify(fast)) out.emplace_back(c.name, c.passed, c.detail);
            return out;
        },
        py::arg("fast") = true);
    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream log, err;
            const int code = cli::main_entry(args, log, err);
            return py::make_tuple(code, log.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process; returns (exit_code, log, errors).");

    m.attr("__version__") = BANDSPEC_VERSION;
}
