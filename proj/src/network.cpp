#include "sideband/network.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sideband/errors.hpp"

namespace sideband {

namespace {

using Cplx = std::complex<double>;

constexpr double kConditionLimit = 1e12;

struct Assembled {
    std::vector<BogoliubovTransfer> transfers;
    std::vector<int> input_offset; // doubled-row offset per element
    int state_size = 0;            // 2 * total element inputs
    std::vector<PortRef> sources;  // unconnected element inputs, then vacuum lines
    int element_sources = 0;
    Eigen::MatrixXcd a;
};

int arow(const Assembled& w, int element, int port)
{
    return w.input_offset[element] + port;
}

int trow(const Assembled& w, int element, int port)
{
    return w.input_offset[element] + w.transfers[element].n_in + port;
}

void check_ports(const Network& net)
{
    const auto& els = net.elements();
    const int nel = static_cast<int>(els.size());
    auto describe = [](const PortRef& p) {
        std::ostringstream o;
        o << "(element " << p.element << ", port " << p.port << ")";
        return o.str();
    };
    std::set<std::pair<int, int>> driven_inputs;
    std::set<std::pair<int, int>> consumed_outputs;
    for (const Connection& c : net.connections()) {
        if (c.from.element == PortRef::kVacuumLine || c.to.element == PortRef::kVacuumLine) {
            throw StructureError("network: vacuum lines cannot be connected, only sinked");
        }
        if (c.from.element < 0 || c.from.element >= nel ||
            c.from.port < 0 || c.from.port >= els[c.from.element]->outputs()) {
            throw StructureError("network: connection from dangling output port " + describe(c.from));
        }
        if (c.to.element < 0 || c.to.element >= nel ||
            c.to.port < 0 || c.to.port >= els[c.to.element]->inputs()) {
            throw StructureError("network: connection into dangling input port " + describe(c.to));
        }
        if (!driven_inputs.insert({c.to.element, c.to.port}).second) {
            throw StructureError("network: input port driven twice " + describe(c.to));
        }
        if (!consumed_outputs.insert({c.from.element, c.from.port}).second) {
            throw StructureError("network: output port consumed twice " + describe(c.from));
        }
    }
    for (const PortRef& s : net.sinks()) {
        if (s.element == PortRef::kVacuumLine) {
            if (s.port < 0 || s.port >= net.vacuum_lines()) {
                throw StructureError("network: sink on undeclared vacuum line " + describe(s));
            }
            continue;
        }
        if (s.element < 0 || s.element >= nel ||
            s.port < 0 || s.port >= els[s.element]->outputs()) {
            throw StructureError("network: sink on dangling output port " + describe(s));
        }
    }
    for (const Injection& inj : net.injections()) {
        const int k = static_cast<int>(inj.ports.size());
        if (inj.quad_covariance.rows() != 2 * k || inj.quad_covariance.cols() != 2 * k) {
            throw StructureError("network: injection covariance must be 2k x 2k over its ports");
        }
        for (const PortRef& p : inj.ports) {
            if (p.element < 0 || p.element >= nel ||
                p.port < 0 || p.port >= els[p.element]->outputs()) {
                throw StructureError("network: injection on dangling output port " + describe(p));
            }
        }
    }
}

Assembled assemble(const Network& net, double omega)
{
    check_ports(net);
    Assembled w;
    const auto& els = net.elements();
    const int nel = static_cast<int>(els.size());
    w.transfers.reserve(nel);
    w.input_offset.resize(nel, 0);
    int off = 0;
    for (int k = 0; k < nel; ++k) {
        BogoliubovTransfer t = els[k]->transfer(omega);
        if (t.matrix.rows() != 2 * t.n_out || t.matrix.cols() != 2 * t.n_in ||
            t.n_in != els[k]->inputs() || t.n_out != els[k]->outputs()) {
            throw StructureError("network: element '" + els[k]->name() +
                                 "' produced a transfer of the wrong shape");
        }
        w.input_offset[k] = off;
        off += 2 * t.n_in;
        w.transfers.push_back(std::move(t));
    }
    w.state_size = off;

    w.a = Eigen::MatrixXcd::Zero(w.state_size, w.state_size);
    std::set<std::pair<int, int>> driven;
    for (const Connection& c : net.connections()) {
        driven.insert({c.to.element, c.to.port});
        const BogoliubovTransfer& src = w.transfers[c.from.element];
        const int cols = 2 * src.n_in;
        const int col0 = w.input_offset[c.from.element];
        const Cplx up = std::exp(Cplx(0.0, c.phase + omega * c.delay));
        const Cplx dn = std::exp(Cplx(0.0, -c.phase + omega * c.delay));
        w.a.row(arow(w, c.to.element, c.to.port)).segment(col0, cols) =
            up * src.matrix.row(c.from.port);
        w.a.row(trow(w, c.to.element, c.to.port)).segment(col0, cols) =
            dn * src.matrix.row(src.n_out + c.from.port);
    }
    for (int e = 0; e < nel; ++e) {
        for (int p = 0; p < w.transfers[e].n_in; ++p) {
            if (!driven.count({e, p})) {
                w.sources.push_back(PortRef{e, p});
            }
        }
    }
    w.element_sources = static_cast<int>(w.sources.size());
    for (int v = 0; v < net.vacuum_lines(); ++v) {
        w.sources.push_back(PortRef{PortRef::kVacuumLine, v});
    }
    return w;
}

double spectral_radius(const Eigen::MatrixXcd& a)
{
    if (a.rows() == 0) {
        return 0.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace

int Network::add_element(ElementPtr el)
{
    if (!el) {
        throw StructureError("network: null element");
    }
    elements_.push_back(std::move(el));
    return static_cast<int>(elements_.size()) - 1;
}

int Network::add_vacuum_line()
{
    return vacuum_lines_++;
}

void Network::connect(PortRef from, PortRef to, double phase, double delay)
{
    connections_.push_back(Connection{from, to, phase, delay});
}

void Network::add_sink(PortRef out)
{
    sinks_.push_back(out);
}

void Network::add_injection(Injection inj)
{
    injections_.push_back(std::move(inj));
}

LoopSolveResult solve(const Network& net, double omega)
{
    Assembled w = assemble(net, omega);
    const int z = w.state_size;
    const int ns = static_cast<int>(w.sources.size());
    const int m = static_cast<int>(net.sinks().size());

    LoopSolveResult res;
    res.loop_gain = spectral_radius(w.a);
    if (res.loop_gain >= 1.0) {
        std::ostringstream o;
        o << "feedback-induced instability / oscillation threshold: loop spectral radius "
          << res.loop_gain << " >= 1";
        throw InstabilityError(o.str());
    }

    const Eigen::MatrixXcd ia = Eigen::MatrixXcd::Identity(z, z) - w.a;
    if (z > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ia);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        res.loop_condition = smin > 0.0 ? smax / smin
                                        : std::numeric_limits<double>::infinity();
    } else {
        res.loop_condition = 1.0;
    }
    if (!(res.loop_condition <= kConditionLimit)) {
        std::ostringstream o;
        o << "feedback-induced instability / oscillation threshold: condition number of (I - A) "
          << res.loop_condition << " exceeds 1e12";
        throw InstabilityError(o.str());
    }

    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(z, 2 * ns);
    for (int k = 0; k < w.element_sources; ++k) {
        b(arow(w, w.sources[k].element, w.sources[k].port), k) = 1.0;
        b(trow(w, w.sources[k].element, w.sources[k].port), ns + k) = 1.0;
    }

    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2 * m, z);
    Eigen::MatrixXcd direct = Eigen::MatrixXcd::Zero(2 * m, 2 * ns);
    for (int k = 0; k < m; ++k) {
        const PortRef s = net.sinks()[k];
        if (s.element == PortRef::kVacuumLine) {
            const int col = w.element_sources + s.port;
            direct(k, col) = 1.0;
            direct(m + k, ns + col) = 1.0;
            continue;
        }
        const BogoliubovTransfer& t = w.transfers[s.element];
        const int col0 = w.input_offset[s.element];
        c.row(k).segment(col0, 2 * t.n_in) = t.matrix.row(s.port);
        c.row(m + k).segment(col0, 2 * t.n_in) = t.matrix.row(t.n_out + s.port);
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ia);
    Eigen::MatrixXcd g = c * lu.solve(b) + direct;
    res.total_transfer = BogoliubovTransfer{g, ns, m};

    const Cplx i1(0.0, 1.0);
    Eigen::MatrixXcd uq = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
    for (int j = 0; j < m; ++j) {
        uq(j, j) = 1.0;
        uq(j, m + j) = 1.0;
        uq(m + j, j) = -i1;
        uq(m + j, m + j) = i1;
    }
    // Vacuum inputs: only <a a^dag> = 1 survives, so only the a-columns enter.
    const Eigen::MatrixXcd p = uq * g.leftCols(ns);
    res.spectrum = (p * p.adjoint()).real();

    for (const Injection& inj : net.injections()) {
        const int k = static_cast<int>(inj.ports.size());
        Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(z, 2 * k);
        Eigen::MatrixXcd jd = Eigen::MatrixXcd::Zero(2 * m, 2 * k);
        for (int idx = 0; idx < k; ++idx) {
            const PortRef p0 = inj.ports[idx];
            for (const Connection& con : net.connections()) {
                if (con.from.element == p0.element && con.from.port == p0.port) {
                    const Cplx up = std::exp(Cplx(0.0, con.phase + omega * con.delay));
                    const Cplx dn = std::exp(Cplx(0.0, -con.phase + omega * con.delay));
                    j(arow(w, con.to.element, con.to.port), idx) += up;
                    j(trow(w, con.to.element, con.to.port), k + idx) += dn;
                }
            }
            for (int sk = 0; sk < m; ++sk) {
                const PortRef s = net.sinks()[sk];
                if (s.element == p0.element && s.port == p0.port) {
                    jd(sk, idx) += 1.0;
                    jd(m + sk, k + idx) += 1.0;
                }
            }
        }
        const Eigen::MatrixXcd minj = c * lu.solve(j) + jd;
        Eigen::MatrixXcd vq = Eigen::MatrixXcd::Zero(2 * k, 2 * k);
        for (int idx = 0; idx < k; ++idx) {
            vq(idx, idx) = 0.5;
            vq(idx, k + idx) = 0.5 * i1;
            vq(k + idx, idx) = 0.5;
            vq(k + idx, k + idx) = -0.5 * i1;
        }
        const Eigen::MatrixXcd r = uq * minj * vq;
        res.spectrum += (r * inj.quad_covariance.cast<Cplx>() * r.adjoint()).real();
    }
    return res;
}

double loop_gain_margin(const Network& net, double omega)
{
    return spectral_radius(assemble(net, omega).a);
}

} // namespace sideband
