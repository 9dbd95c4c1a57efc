#include "leray/forms.hpp"

#include <cmath>

#include "leray/parallel.hpp"

namespace leray {

cplx FieldJet::d(const Tangent& t) const {
    cplx s = 0.0;
    for (std::size_t j = 0; j < dz.size(); ++j)
        s += dz[j] * t.dz[j] + dzbar[j] * std::conj(t.dz[j]);
    for (std::size_t k = 0; k < dmu.size() && k < t.dmu.size(); ++k)
        s += dmu[k] * t.dmu[k];
    return s;
}

LevelChart::LevelChart(ConvexBody body, double nu, int res)
    : body_(std::move(body)), nu_(nu), rule_(sphere_rule(body_.dim(), res)) {
    frame_size_ = 2 * body_.dim() - 1;
}

void LevelChart::node(std::size_t i, ChartNode& out) const {
    auto angles = rule_.point(i);
    out.mu.clear();
    std::vector<CVec> tangents;
    level_point(body_, nu_, angles, out.zeta, tangents);
    out.frame.resize(tangents.size());
    for (std::size_t k = 0; k < tangents.size(); ++k) {
        out.frame[k].dz = std::move(tangents[k]);
        out.frame[k].dmu.clear();
    }
    out.weight = rule_.weights[i];
}

ScalarField constant_field(cplx c) {
    return {[c](const ChartNode& node) {
        FieldJet j((int)node.zeta.size(), (int)node.mu.size());
        j.value = c;
        return j;
    }};
}

cplx leray_det(std::span<const FieldJet> theta, std::span<const Tangent> frame) {
    const int n = (int)theta.size();
    const int dim = 2 * n;  // theta rows + position rows, plus the value column
    if ((int)frame.size() != dim - 1)
        throw std::invalid_argument("leray_det: frame must have 2n-1 vectors");
    CVec m((std::size_t)dim * dim, cplx(0.0));
    for (int j = 0; j < n; ++j) {
        m[(std::size_t)j * dim] = theta[j].value;
        for (int c = 1; c < dim; ++c) m[(std::size_t)j * dim + c] = theta[j].d(frame[c - 1]);
    }
    for (int j = 0; j < n; ++j) {
        std::size_t row = (std::size_t)(n + j) * dim;
        for (int c = 1; c < dim; ++c) m[row + c] = frame[c - 1].dz[j];
    }
    return det(m, dim);
}

cplx leray_det_cutoff(std::span<const FieldJet> theta, std::span<const double> dphi_real,
                      std::span<const Tangent> frame) {
    const int n = (int)theta.size();
    const int dim = 2 * n + 1;
    if ((int)frame.size() != dim - 1)
        throw std::invalid_argument("leray_det_cutoff: frame must have 2n vectors");
    CVec m((std::size_t)dim * dim, cplx(0.0));
    for (int j = 0; j < n; ++j) {
        m[(std::size_t)j * dim] = theta[j].value;
        for (int c = 1; c < dim; ++c) m[(std::size_t)j * dim + c] = theta[j].d(frame[c - 1]);
    }
    for (int c = 1; c < dim; ++c) {
        const Tangent& t = frame[c - 1];
        double s = 0.0;
        for (std::size_t j = 0; j < t.dz.size(); ++j)
            s += dphi_real[2 * j] * t.dz[j].real() + dphi_real[2 * j + 1] * t.dz[j].imag();
        m[(std::size_t)n * dim + c] = s;
    }
    for (int j = 0; j < n; ++j) {
        std::size_t row = (std::size_t)(n + 1 + j) * dim;
        for (int c = 1; c < dim; ++c) m[row + c] = frame[c - 1].dz[j];
    }
    return det(m, dim);
}

FormValue omega0_prime(std::vector<ScalarField> theta) {
    const int n = (int)theta.size();
    FormValue f;
    f.degree = n - 1;
    f.eval = [theta = std::move(theta), n](const ChartNode& node,
                                           std::span<const Tangent> frame) -> cplx {
        if ((int)frame.size() != n - 1)
            throw std::invalid_argument("omega0_prime: frame must have n-1 vectors");
        std::vector<FieldJet> jets(n);
        for (int j = 0; j < n; ++j) jets[j] = theta[j].jet(node);
        if (n == 1) return jets[0].value;
        // Bordered determinant: column 0 the theta values, then d theta rows.
        CVec m((std::size_t)n * n, cplx(0.0));
        for (int j = 0; j < n; ++j) {
            m[(std::size_t)j * n] = jets[j].value;
            for (int c = 1; c < n; ++c) m[(std::size_t)j * n + c] = jets[j].d(frame[c - 1]);
        }
        return det(m, n);
    };
    return f;
}

FormValue omega_prime_eta(const ConvexBody& body) {
    const int n = body.dim();
    std::vector<ScalarField> theta(n);
    for (int j = 0; j < n; ++j) {
        double rj2 = body.radii[j] * body.radii[j];
        cplx cj = body.center[j];
        theta[j] = {[j, rj2, cj](const ChartNode& node) {
            FieldJet jet((int)node.zeta.size(), (int)node.mu.size());
            jet.value = std::conj(node.zeta[j] - cj) / rj2;
            jet.dzbar[j] = 1.0 / rj2;
            return jet;
        }};
    }
    return omega0_prime(std::move(theta));
}

cplx pullback_integrate(const Chart& chart, const FormValue& form,
                        const std::function<cplx(const ChartNode&)>& prefactor, int workers) {
    if (form.degree != chart.frame_size())
        throw std::invalid_argument("pullback_integrate: form degree != chart dimension");
    auto vals = integrate_batch(chart, 1, workers, [&](const ChartNode& node, cplx* out) {
        cplx pf = prefactor ? prefactor(node) : cplx(1.0);
        out[0] = pf * form.eval(node, node.frame);
    });
    return vals[0];
}

std::vector<cplx> integrate_batch(const Chart& chart, std::size_t width, int workers,
                                  const std::function<void(const ChartNode&, cplx*)>& fn) {
    return parallel_accumulate(chart.count(), width, workers,
                               [&](std::size_t i, cplx* out) {
                                   thread_local ChartNode node;
                                   thread_local std::vector<cplx> vals;
                                   vals.assign(width, cplx(0.0));
                                   chart.node(i, node);
                                   fn(node, vals.data());
                                   for (std::size_t k = 0; k < width; ++k)
                                       out[k] += vals[k] * node.weight;
                               });
}

}  // namespace leray
