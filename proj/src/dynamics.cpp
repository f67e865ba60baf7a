#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "genkin/dynamics.hpp"
#include "genkin/errors.hpp"

namespace genkin {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
using Arr = std::array<double, 6>;  // r components then p components

struct Rhs {
    const SystemSpec* sys;
    int d;             // spatial dimension
    double r_guard;    // minimum radius (0: no guard)
    mutable long evals = 0;

    void operator()(const double* y, double* f) const {
        ++evals;
        Vec r = Vec::zero(d), p = Vec::zero(d);
        for (int i = 0; i < d; ++i) {
            r[i] = y[i];
            p[i] = y[d + i];
        }
        if (r_guard > 0.0 && r.norm() < r_guard)
            throw SingularityError("trajectory entered the minimum-radius guard");
        Vec v = kinetic_velocity(sys->kinetic, p);
        Vec F = potential_force(sys->potential, r);
        for (int i = 0; i < d; ++i) {
            f[i] = v[i];
            f[d + i] = F[i];
        }
    }
};

double hinit(const Rhs& rhs, const double* y, const double* f0, double t,
             double t_dir, double atol, double rtol, int n, int order) {
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < n; ++i) {
        double sk = atol + rtol * std::abs(y[i]);
        d0 += (y[i] / sk) * (y[i] / sk);
        d1 += (f0[i] / sk) * (f0[i] / sk);
    }
    double h = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * std::sqrt(d0 / d1);
    Arr y1, f1;
    for (int i = 0; i < n; ++i) y1[i] = y[i] + t_dir * h * f0[i];
    rhs(y1.data(), f1.data());
    (void)t;
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double sk = atol + rtol * std::abs(y[i]);
        double df = (f1[i] - f0[i]) / sk;
        d2 += df * df;
    }
    d2 = std::sqrt(d2) / h;
    double der12 = std::max(std::sqrt(d1), d2);
    double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                 : std::pow(0.01 / der12, 1.0 / order);
    return std::min(100.0 * h, h1);
}

// ------------------------------------------------------------------ RK5(4) --

namespace rk54 {
constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;
}  // namespace rk54

// ----------------------------------------------------------------- RK8(5,3) --

namespace rk853 {
constexpr double c2 = 0.526001519587677318785587544488e-1;
constexpr double c3 = 0.789002279381515978178381316732e-1;
constexpr double c4 = 0.118350341907227396726757197510;
constexpr double c5 = 0.281649658092772603273242802490;
constexpr double c6 = 0.333333333333333333333333333333;
constexpr double c7 = 0.25;
constexpr double c8 = 0.307692307692307692307692307692;
constexpr double c9 = 0.651282051282051282051282051282;
constexpr double c10 = 0.6;
constexpr double c11 = 0.857142857142857142857142857142;
constexpr double c14 = 0.1, c15 = 0.2, c16 = 0.777777777777777777777777777778;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.70370370370370370370370370370e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.37142430085987325717040216580e-1;
constexpr double a114 = 5.18637242884406370830023853209;
constexpr double a115 = 1.09143734899672957818500254654;
constexpr double a116 = -8.14978701074692612513997267357;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762;
constexpr double a1110 = -3.04676447189821950038236690220;
constexpr double a121 = 2.27331014751653820792359768449;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674;
constexpr double a129 = -8.87285693353062954433549289258;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566;
constexpr double b7 = 1.89151789931450038304281599044;
constexpr double b8 = -5.80120396001058478146721142270;
constexpr double b9 = 3.11164366957819894408916062370e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512;
constexpr double bhh2 = 0.733846688281611857341361741547;
constexpr double bhh3 = 0.220588235294117647058823529412e-1;

constexpr double er1 = 0.1312004499419488073250102996e-1;
constexpr double er6 = -0.1225156446376204440720569753e1;
constexpr double er7 = -0.4957589496572501915214079952;
constexpr double er8 = 0.1664377182454986536961530415e1;
constexpr double er9 = -0.3503288487499736816886487290;
constexpr double er10 = 0.3341791187130174790297318841;
constexpr double er11 = 0.8192320648511571246570742613e-1;
constexpr double er12 = -0.2235530786388629525884427845e-1;

constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.53291798278765697312063226850e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206;
constexpr double a167 = 7.68342119606259904184240953878;
constexpr double a168 = 4.06898981839711007970213554331;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.94751478915277233895562721490;
constexpr double a1615 = -9.15095847217987001081870187138;

constexpr double d41 = -0.84289382761090128651353491142e1;
constexpr double d46 = 0.56671495351937776962531783590;
constexpr double d47 = -0.30689499459498916912797304727e1;
constexpr double d48 = 0.23846676565120698287728149680e1;
constexpr double d49 = 0.21170345824450282767155149946e1;
constexpr double d410 = -0.87139158377797299206789907490;
constexpr double d411 = 0.22404374302607882758541771650e1;
constexpr double d412 = 0.63157877876946881815570249290;
constexpr double d413 = -0.88990336451333310820698117400e-1;
constexpr double d414 = 0.18148505520854727256656404962e2;
constexpr double d415 = -0.91946323924783554000451984436e1;
constexpr double d416 = -0.44360363875948939664310572000e1;
constexpr double d51 = 0.10427508642579134603413151009e2;
constexpr double d56 = 0.24228349177525818288430175319e3;
constexpr double d57 = 0.16520045171727028198505394887e3;
constexpr double d58 = -0.37454675472269020279518312152e3;
constexpr double d59 = -0.22113666853125306036270938578e2;
constexpr double d510 = 0.77334326684722638389603898808e1;
constexpr double d511 = -0.30674084731089398182061213626e2;
constexpr double d512 = -0.93321305264302278729567221706e1;
constexpr double d513 = 0.15697238121770843886131091075e2;
constexpr double d514 = -0.31139403219565177677282850411e2;
constexpr double d515 = -0.93529243588444783865713862664e1;
constexpr double d516 = 0.35816841486394083752465898540e2;
constexpr double d61 = 0.19985053242002433820987653617e2;
constexpr double d66 = -0.38703730874935176555105901742e3;
constexpr double d67 = -0.18917813819516756882830838328e3;
constexpr double d68 = 0.52780815920542364900561016686e3;
constexpr double d69 = -0.11573902539959630126141871134e2;
constexpr double d610 = 0.68812326946963000169666922661e1;
constexpr double d611 = -0.10006050966910838403183860980e1;
constexpr double d612 = 0.77771377980534432092869265740;
constexpr double d613 = -0.27782057523535084065932004339e1;
constexpr double d614 = -0.60196695231264120758267380846e2;
constexpr double d615 = 0.84320405506677161018159903784e2;
constexpr double d616 = 0.11992291136182789328035130030e2;
constexpr double d71 = -0.25693933462703749003312586129e2;
constexpr double d76 = -0.15418974869023643374053993627e3;
constexpr double d77 = -0.23152937917604549567536039109e3;
constexpr double d78 = 0.35763911791061412378285349910e3;
constexpr double d79 = 0.93405324183624310003907691704e2;
constexpr double d710 = -0.37458323136451633156875139351e2;
constexpr double d711 = 0.10409964950896230045147246184e3;
constexpr double d712 = 0.29840293426660503123344363579e2;
constexpr double d713 = -0.43533456590011143754432175058e2;
constexpr double d714 = 0.96324553959188282948394950600e2;
constexpr double d715 = -0.39177261675615439165231486172e2;
constexpr double d716 = -0.14972683625798562581422125276e3;
}  // namespace rk853

}  // namespace

// ---------------------------------------------------------------------------

const Trajectory::Segment& Trajectory::segment_for(double t) const {
    double lo = std::min(t0_, t1_), hi = std::max(t0_, t1_);
    double pad = 1e-9 * (hi - lo) + 1e-300;
    if (t < lo - pad || t > hi + pad)
        throw RangeError("state_at: time outside trajectory span");
    // segments are ordered by t0; find the one containing t
    size_t lo_i = 0, hi_i = segments_.size();
    while (hi_i - lo_i > 1) {
        size_t mid = (lo_i + hi_i) / 2;
        if (segments_[mid].t0 <= t)
            lo_i = mid;
        else
            hi_i = mid;
    }
    return segments_[lo_i];
}

PhaseState Trajectory::state_at(double t) const {
    const Segment& seg = segment_for(t);
    int d = sys_->dimension, n = 2 * d;
    double th = (t - seg.t0) / seg.h, th1 = 1.0 - th;
    PhaseState s;
    s.t = t;
    s.r = Vec::zero(d);
    s.p = Vec::zero(d);
    const double* rc = seg.rcont.data();
    auto comp = [&](int i) {
        if (method_ == Integrator::rk54) {
            // quartic: c0 + th(c1 + th1(c2 + th(c3 + th1 c4)))
            return rc[i] + th * (rc[n + i] +
                                 th1 * (rc[2 * n + i] +
                                        th * (rc[3 * n + i] + th1 * rc[4 * n + i])));
        }
        double v = rc[6 * n + i] + th * rc[7 * n + i];
        v = rc[5 * n + i] + th1 * v;
        v = rc[4 * n + i] + th * v;
        v = rc[3 * n + i] + th1 * v;
        v = rc[2 * n + i] + th * v;
        v = rc[n + i] + th1 * v;
        return rc[i] + th * v;
    };
    for (int i = 0; i < d; ++i) {
        s.r[i] = comp(i);
        s.p[i] = comp(d + i);
    }
    return s;
}

Trajectory integrate(const SystemSpec& sys, const PhaseState& initial,
                     double t_end, const IntegrateOptions& opts) {
    if (sys.dimension < 1 || sys.dimension > 3)
        throw DimensionError("integrate: dimension must be 1..3");
    if (initial.r.dim() != sys.dimension || initial.p.dim() != sys.dimension)
        throw DimensionError("integrate: initial state dimension mismatch");
    if (!(opts.rel_tol >= 1e-14 && opts.rel_tol <= 1e-3))
        throw RangeError("integrate: rel_tol must lie in [1e-14, 1e-3]");
    if (t_end == initial.t) throw RangeError("integrate: empty time span");

    const int d = sys.dimension, n = 2 * d;
    const double rtol = opts.rel_tol;
    const double atol = opts.abs_tol >= 0.0 ? opts.abs_tol : opts.rel_tol;
    const bool use853 = opts.method == Integrator::rk853;
    const double t_dir = t_end > initial.t ? 1.0 : -1.0;

    Trajectory traj;
    traj.sys_ = std::make_shared<SystemSpec>(sys);
    traj.method_ = opts.method;
    traj.t0_ = initial.t;
    traj.budget_ = opts.drift_budget;

    Rhs rhs{&sys, d, 0.0, 0};
    if (sys.potential.singular_at_origin())
        rhs.r_guard = opts.singular_guard * initial.r.norm();

    Arr y{}, k1{};
    for (int i = 0; i < d; ++i) {
        y[i] = initial.r[i];
        y[d + i] = initial.p[i];
    }
    double t = initial.t;
    rhs(y.data(), k1.data());
    double h = opts.initial_step > 0.0
                   ? opts.initial_step
                   : hinit(rhs, y.data(), k1.data(), t, t_dir, atol, rtol, n,
                           use853 ? 8 : 5);
    h = std::min(h, std::abs(t_end - t));

    traj.samples_.push_back({t, initial.r, initial.p});

    const double safe = 0.9;
    double facold = 1e-4;
    bool last = false, rejected = false;

    Arr k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, k8{}, k9{}, k10{}, k11{}, k12{},
        k13{}, yw{}, ytmp{};

    auto push_sample = [&](double tt, const double* yy) {
        PhaseState s;
        s.t = tt;
        s.r = Vec::zero(d);
        s.p = Vec::zero(d);
        for (int i = 0; i < d; ++i) {
            s.r[i] = yy[i];
            s.p[i] = yy[d + i];
        }
        traj.samples_.push_back(s);
    };

    while (true) {
        if (traj.accepted_ + traj.rejected_ > opts.max_steps)
            throw NumericalError("integrate: step budget exhausted");
        if (0.1 * std::abs(h) <= std::abs(t) * kEps)
            throw NumericalError("integrate: step size underflow at t = " +
                                 std::to_string(t));
        if (std::abs(t + t_dir * h - initial.t) >= std::abs(t_end - initial.t)) {
            h = std::abs(t_end - t);
            last = true;
        }
        double hs = t_dir * h;  // signed step

        double err;
        if (!use853) {
            using namespace rk54;
            auto stage = [&](const double* co, int m, double cc) {
                const double* ks[] = {k1.data(), k2.data(), k3.data(),
                                      k4.data(), k5.data(), k6.data()};
                for (int i = 0; i < n; ++i) {
                    double acc = 0.0;
                    for (int j = 0; j < m; ++j) acc += co[j] * ks[j][i];
                    ytmp[i] = y[i] + hs * acc;
                }
                (void)cc;
            };
            const double s2[] = {a21};
            const double s3[] = {a31, a32};
            const double s4[] = {a41, a42, a43};
            const double s5[] = {a51, a52, a53, a54};
            const double s6[] = {a61, a62, a63, a64, a65};
            const double s7[] = {a71, 0.0, a73, a74, a75, a76};
            stage(s2, 1, c2); rhs(ytmp.data(), k2.data());
            stage(s3, 2, c3); rhs(ytmp.data(), k3.data());
            stage(s4, 3, c4); rhs(ytmp.data(), k4.data());
            stage(s5, 4, c5); rhs(ytmp.data(), k5.data());
            stage(s6, 5, 1.0); rhs(ytmp.data(), k6.data());
            stage(s7, 6, 1.0);
            std::memcpy(yw.data(), ytmp.data(), sizeof(double) * n);
            rhs(yw.data(), k7.data());
            err = 0.0;
            for (int i = 0; i < n; ++i) {
                double sk = atol + rtol * std::max(std::abs(y[i]), std::abs(yw[i]));
                double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                 e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                err += (e / sk) * (e / sk);
            }
            err = std::sqrt(err / n);
        } else {
            using namespace rk853;
            auto comb = [&](std::initializer_list<std::pair<const double*, double>> terms) {
                for (int i = 0; i < n; ++i) {
                    double acc = 0.0;
                    for (auto& tpair : terms) acc += tpair.second * tpair.first[i];
                    ytmp[i] = y[i] + hs * acc;
                }
            };
            comb({{k1.data(), a21}});
            rhs(ytmp.data(), k2.data());
            comb({{k1.data(), a31}, {k2.data(), a32}});
            rhs(ytmp.data(), k3.data());
            comb({{k1.data(), a41}, {k3.data(), a43}});
            rhs(ytmp.data(), k4.data());
            comb({{k1.data(), a51}, {k3.data(), a53}, {k4.data(), a54}});
            rhs(ytmp.data(), k5.data());
            comb({{k1.data(), a61}, {k4.data(), a64}, {k5.data(), a65}});
            rhs(ytmp.data(), k6.data());
            comb({{k1.data(), a71}, {k4.data(), a74}, {k5.data(), a75}, {k6.data(), a76}});
            rhs(ytmp.data(), k7.data());
            comb({{k1.data(), a81}, {k4.data(), a84}, {k5.data(), a85}, {k6.data(), a86},
                  {k7.data(), a87}});
            rhs(ytmp.data(), k8.data());
            comb({{k1.data(), a91}, {k4.data(), a94}, {k5.data(), a95}, {k6.data(), a96},
                  {k7.data(), a97}, {k8.data(), a98}});
            rhs(ytmp.data(), k9.data());
            comb({{k1.data(), a101}, {k4.data(), a104}, {k5.data(), a105},
                  {k6.data(), a106}, {k7.data(), a107}, {k8.data(), a108},
                  {k9.data(), a109}});
            rhs(ytmp.data(), k10.data());
            comb({{k1.data(), a111}, {k4.data(), a114}, {k5.data(), a115},
                  {k6.data(), a116}, {k7.data(), a117}, {k8.data(), a118},
                  {k9.data(), a119}, {k10.data(), a1110}});
            rhs(ytmp.data(), k11.data());
            comb({{k1.data(), a121}, {k4.data(), a124}, {k5.data(), a125},
                  {k6.data(), a126}, {k7.data(), a127}, {k8.data(), a128},
                  {k9.data(), a129}, {k10.data(), a1210}, {k11.data(), a1211}});
            rhs(ytmp.data(), k12.data());
            // 8th-order solution and the two embedded error estimators
            double err5 = 0.0, err3 = 0.0;
            for (int i = 0; i < n; ++i) {
                double bsum = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] +
                              b9 * k9[i] + b10 * k10[i] + b11 * k11[i] +
                              b12 * k12[i];
                k4[i] = bsum;  // reuse as Hairer does: weighted slope sum
                yw[i] = y[i] + hs * bsum;
            }
            for (int i = 0; i < n; ++i) {
                double sk = atol + rtol * std::max(std::abs(y[i]), std::abs(yw[i]));
                double e3v = k4[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i];
                double e5v = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] +
                             er8 * k8[i] + er9 * k9[i] + er10 * k10[i] +
                             er11 * k11[i] + er12 * k12[i];
                err3 += (e3v / sk) * (e3v / sk);
                err5 += (e5v / sk) * (e5v / sk);
            }
            double deno = err5 + 0.01 * err3;
            if (deno <= 0.0) deno = 1.0;
            err = std::abs(hs) * err5 * std::sqrt(1.0 / (n * deno));
        }

        if (!std::isfinite(err)) err = 2.0;  // force rejection on NaN stages

        const double expo1 = use853 ? 1.0 / 8.0 : 0.2 - 0.04 * 0.75;
        const double facc1 = use853 ? 1.0 / 0.333 : 1.0 / 0.2;
        const double facc2 = use853 ? 1.0 / 6.0 : 1.0 / 10.0;
        double fac11 = std::pow(std::max(err, 1e-32), expo1);

        if (err <= 1.0) {
            // accepted
            double fac = fac11 / std::pow(facold, use853 ? 0.0 : 0.04);
            facold = std::max(err, 1e-4);
            double hnew = h / std::min(facc1, std::max(facc2, fac / safe));
            if (rejected) hnew = std::min(hnew, h);
            rejected = false;

            Trajectory::Segment seg;
            seg.t0 = t;
            seg.h = hs;
            if (!use853) {
                using namespace rk54;
                seg.rcont.resize(5 * n);
                double* rc = seg.rcont.data();
                for (int i = 0; i < n; ++i) {
                    double dy = yw[i] - y[i];
                    double bspl = hs * k1[i] - dy;
                    rc[i] = y[i];
                    rc[n + i] = dy;
                    rc[2 * n + i] = bspl;
                    rc[3 * n + i] = dy - hs * k7[i] - bspl;
                    rc[4 * n + i] =
                        hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                              d6 * k6[i] + d7 * k7[i]);
                }
                std::memcpy(k1.data(), k7.data(), sizeof(double) * n);  // FSAL
            } else {
                using namespace rk853;
                rhs(yw.data(), k13.data());
                seg.rcont.resize(8 * n);
                double* rc = seg.rcont.data();
                for (int i = 0; i < n; ++i) {
                    double dy = yw[i] - y[i];
                    double bspl = hs * k1[i] - dy;
                    rc[i] = y[i];
                    rc[n + i] = dy;
                    rc[2 * n + i] = bspl;
                    rc[3 * n + i] = dy - hs * k13[i] - bspl;
                    rc[4 * n + i] = d41 * k1[i] + d46 * k6[i] + d47 * k7[i] +
                                    d48 * k8[i] + d49 * k9[i] + d410 * k10[i] +
                                    d411 * k11[i] + d412 * k12[i] + d413 * k13[i];
                    rc[5 * n + i] = d51 * k1[i] + d56 * k6[i] + d57 * k7[i] +
                                    d58 * k8[i] + d59 * k9[i] + d510 * k10[i] +
                                    d511 * k11[i] + d512 * k12[i] + d513 * k13[i];
                    rc[6 * n + i] = d61 * k1[i] + d66 * k6[i] + d67 * k7[i] +
                                    d68 * k8[i] + d69 * k9[i] + d610 * k10[i] +
                                    d611 * k11[i] + d612 * k12[i] + d613 * k13[i];
                    rc[7 * n + i] = d71 * k1[i] + d76 * k6[i] + d77 * k7[i] +
                                    d78 * k8[i] + d79 * k9[i] + d710 * k10[i] +
                                    d711 * k11[i] + d712 * k12[i] + d713 * k13[i];
                }
                // three extra stages complete the 7th-order interpolant
                auto comb2 = [&](std::initializer_list<std::pair<const double*, double>> terms) {
                    for (int i = 0; i < n; ++i) {
                        double acc = 0.0;
                        for (auto& tp : terms) acc += tp.second * tp.first[i];
                        ytmp[i] = y[i] + hs * acc;
                    }
                };
                Arr k14{}, k15{}, k16{};
                comb2({{k1.data(), a141}, {k7.data(), a147}, {k8.data(), a148},
                       {k9.data(), a149}, {k10.data(), a1410}, {k11.data(), a1411},
                       {k12.data(), a1412}, {k13.data(), a1413}});
                rhs(ytmp.data(), k14.data());
                comb2({{k1.data(), a151}, {k6.data(), a156}, {k7.data(), a157},
                       {k8.data(), a158}, {k11.data(), a1511}, {k12.data(), a1512},
                       {k13.data(), a1513}, {k14.data(), a1514}});
                rhs(ytmp.data(), k15.data());
                comb2({{k1.data(), a161}, {k6.data(), a166}, {k7.data(), a167},
                       {k8.data(), a168}, {k9.data(), a169}, {k13.data(), a1613},
                       {k14.data(), a1614}, {k15.data(), a1615}});
                rhs(ytmp.data(), k16.data());
                for (int i = 0; i < n; ++i) {
                    rc[4 * n + i] = hs * (rc[4 * n + i] + d414 * k14[i] +
                                          d415 * k15[i] + d416 * k16[i]);
                    rc[5 * n + i] = hs * (rc[5 * n + i] + d514 * k14[i] +
                                          d515 * k15[i] + d516 * k16[i]);
                    rc[6 * n + i] = hs * (rc[6 * n + i] + d614 * k14[i] +
                                          d615 * k15[i] + d616 * k16[i]);
                    rc[7 * n + i] = hs * (rc[7 * n + i] + d714 * k14[i] +
                                          d715 * k15[i] + d716 * k16[i]);
                }
                std::memcpy(k1.data(), k13.data(), sizeof(double) * n);
            }
            traj.segments_.push_back(std::move(seg));

            t += hs;
            std::memcpy(y.data(), yw.data(), sizeof(double) * n);
            for (int i = 0; i < n; ++i)
                if (!std::isfinite(y[i]))
                    throw NumericalError("integrate: non-finite state at t = " +
                                         std::to_string(t));
            push_sample(t, y.data());
            ++traj.accepted_;
            if (last) break;
            h = hnew;
        } else {
            h /= std::min(facc1, fac11 / safe);
            rejected = true;
            last = false;
            ++traj.rejected_;
        }
    }

    traj.t1_ = t;

    // energy bookkeeping over accepted samples
    double meanT = 0.0, meanV = 0.0;
    traj.E0_ = sys.hamiltonian(traj.samples_.front());
    double maxdev = 0.0;
    for (const auto& s : traj.samples_) {
        double T = kinetic_eval(sys.kinetic, s.p.norm2());
        double V = potential_eval(sys.potential, s.r);
        meanT += std::abs(T);
        meanV += V;
        maxdev = std::max(maxdev, std::abs(T + V - traj.E0_));
    }
    meanT /= traj.samples_.size();
    meanV /= traj.samples_.size();
    traj.escale_ = meanT + std::abs(meanV);
    double denom = std::max(std::abs(traj.E0_), traj.escale_);
    traj.drift_ = denom > 0.0 ? maxdev / denom : maxdev;
    if (traj.drift_ > opts.drift_budget)
        throw NumericalError("integrate: energy drift " +
                             std::to_string(traj.drift_) +
                             " exceeded the budget");
    return traj;
}

}  // namespace genkin
