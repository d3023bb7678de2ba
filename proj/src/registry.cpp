#include "mrigark/registry.hpp"

#include <algorithm>
#include <map>

namespace mrigark {

namespace {

using RMat = Matrix<Rational>;
using RVec = Vector<Rational>;

RVec rvec(std::initializer_list<Rational> xs) { return RVec(xs); }

/// Expands rows given on the base-method (odd) stage columns to the full
/// alternating-stage layout; even columns stay zero.
template <class T>
Matrix<T> expand_odd_columns(const std::vector<std::vector<T>>& rows, std::size_t s)
{
    Matrix<T> out = zero_matrix<T>(rows.size(), s);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            out[i][2 * j] = rows[i][j];
    return out;
}

template <class T>
Vector<T> expand_odd_columns_vec(const std::vector<T>& row, std::size_t s)
{
    Vector<T> out(s, T(0));
    for (std::size_t j = 0; j < row.size(); ++j)
        out[2 * j] = row[j];
    return out;
}

template <class T>
void finalize(MriGarkMethod<T>& m)
{
    m.base.dc = stage_increments(m.base.c);
    // exact storage validates exactly; Real50 methods to fp granularity
    if constexpr (std::is_same_v<T, Rational>)
        validate_method(m, Rational(0));
    else
        validate_method(m, scalar_cast<T>(1e-40));
}

MriGarkMethod<Rational> build_erk45a()
{
    MriGarkMethod<Rational> m;
    m.name = "mri-erk45a";
    m.order = 4;
    m.embedded_order = 3;
    m.kind = MethodKind::explicit_method;
    m.base.c = rvec({0, frac(1, 5), frac(2, 5), frac(3, 5), frac(4, 5)});
    m.base.A = zero_matrix<Rational>(5, 5);
    m.base.A[1][0] = frac(1, 5);
    m.base.A[2][0] = frac(1, 32);
    m.base.A[2][1] = frac(59, 160);
    m.base.A[3][0] = frac(-1, 2);
    m.base.A[3][1] = frac(171, 64);
    m.base.A[3][2] = frac(-503, 320);
    m.base.A[4][0] = frac(125773, 379760);
    m.base.A[4][1] = frac(-183399, 379760);
    m.base.A[4][2] = frac(175277, 189880);
    m.base.A[4][3] = frac(136, 4747);
    m.base.b = rvec({frac(1, 32), frac(1, 3), frac(11, 48), frac(-1, 12), frac(47, 96)});
    m.base.b_hat = rvec({frac(1, 8), frac(6403, 71670), frac(28571, 71670),
                         frac(-4681, 71670), frac(129673, 286680)});

    RMat g0 = zero_matrix<Rational>(5, 5);
    g0[0][0] = frac(1, 5);
    g0[1][0] = frac(-53, 16);
    g0[1][1] = frac(281, 80);
    g0[2][0] = frac(-36562993, 71394880);
    g0[2][1] = frac(34903117, 17848720);
    g0[2][2] = frac(-88770499, 71394880);
    g0[3][0] = frac(-7631593, 71394880);
    g0[3][1] = frac(-166232021, 35697440);
    g0[3][2] = frac(6068517, 1519040);
    g0[3][3] = frac(8644289, 8924360);
    g0[4][0] = frac(277061, 303808);
    g0[4][1] = frac(-209323, 1139280);
    g0[4][2] = frac(-1360217, 1139280);
    g0[4][3] = frac(-148789, 56964);
    g0[4][4] = frac(147889, 45120);
    RMat g1 = zero_matrix<Rational>(5, 5);
    g1[1][0] = frac(503, 80);
    g1[1][1] = frac(-503, 80);
    g1[2][0] = frac(-1365537, 35697440);
    g1[2][1] = frac(4963773, 7139488);
    g1[2][2] = frac(-1465833, 2231090);
    g1[3][0] = frac(66974357, 35697440);
    g1[3][1] = frac(21445367, 7139488);
    g1[3][2] = Rational(-3);
    g1[3][3] = frac(-8388609, 4462180);
    g1[4][0] = frac(-18227, 7520);
    g1[4][1] = Rational(2);
    g1[4][2] = Rational(1);
    g1[4][3] = Rational(5);
    g1[4][4] = frac(-41933, 7520);
    m.gammas.gamma = {g0, g1};

    // The embedded degree-1 row as tabulated; the degree-0 row is fixed by the
    // embedded weights through ghat_bar = b_hat - A[s-1] (the tabulated
    // degree-0 row integrates to the main weights instead).
    RVec gh1 = rvec({frac(6213, 1880), frac(-6213, 1880), 0, 0, 0});
    RVec gh0(5);
    for (int j = 0; j < 5; ++j)
        gh0[j] = (*m.base.b_hat)[j] - m.base.A[4][j] - gh1[j] / 2;
    m.gammas.gamma_hat = {gh0, gh1};
    finalize(m);
    return m;
}

MriGarkMethod<Rational> build_irk21a()
{
    MriGarkMethod<Rational> m;
    m.name = "mri-irk21a";
    m.order = 2;
    m.embedded_order = 1;
    m.kind = MethodKind::decoupled_implicit;
    m.base.c = rvec({0, 1, 1});
    m.base.A = expand_odd_columns<Rational>({{}, {1}, {frac(1, 2), frac(1, 2)}}, 3);
    m.base.b = expand_odd_columns_vec<Rational>({frac(1, 2), frac(1, 2)}, 3);
    m.base.b_hat = expand_odd_columns_vec<Rational>({0, 1}, 3);
    m.gammas.gamma = {expand_odd_columns<Rational>({{1}, {frac(-1, 2), frac(1, 2)}, {}}, 3)};
    m.gammas.gamma_hat = {expand_odd_columns_vec<Rational>({frac(-1, 2), frac(1, 2)}, 3)};
    finalize(m);
    return m;
}

MriGarkMethod<Rational> build_esdirk46a()
{
    MriGarkMethod<Rational> m;
    m.name = "mri-esdirk46a";
    m.order = 4;
    m.embedded_order = 3;
    m.kind = MethodKind::decoupled_implicit;
    m.base.c = rvec({0, frac(1, 5), frac(1, 5), frac(2, 5), frac(2, 5), frac(3, 5),
                     frac(3, 5), frac(4, 5), frac(4, 5), 1, 1});
    m.base.A = expand_odd_columns<Rational>(
        {{},
         {frac(1, 5)},
         {frac(-1, 20), frac(1, 4)},
         {0, frac(2, 5)},
         {frac(-103, 380), frac(8, 19), frac(1, 4)},
         {0, 0, frac(3, 5)},
         {frac(202381, 316160), frac(2199, 31616), frac(-1197, 3328), frac(1, 4)},
         {0, 0, 0, frac(4, 5)},
         {frac(1978577, 3575040), frac(20417, 119168), frac(-3579, 12544), frac(65, 588), frac(1, 4)},
         {0, 0, 0, 0, 1},
         {frac(1, 4), frac(-7, 24), frac(13, 24), frac(13, 24), frac(-7, 24), frac(1, 4)}},
        11);
    m.base.b = expand_odd_columns_vec<Rational>(
        {frac(1, 4), frac(-7, 24), frac(13, 24), frac(13, 24), frac(-7, 24), frac(1, 4)}, 11);
    m.base.b_hat = expand_odd_columns_vec<Rational>(
        {0, frac(18163, 52824), frac(13943, 52824), frac(3263, 52824), frac(11053, 52824),
         frac(1067, 8804)},
        11);
    m.gammas.gamma = {
        expand_odd_columns<Rational>(
            {{frac(1, 5)},
             {frac(-1, 4), frac(1, 4)},
             {frac(1771023115159LL, 1929363690800LL), frac(-1385150376999LL, 1929363690800LL)},
             {frac(914009, 345800), frac(-1000459, 345800), frac(1, 4)},
             {frac(18386293581909LL, 36657910125200LL), frac(5506531089LL, 80566835440LL),
              frac(-178423463189LL, 482340922700LL)},
             {frac(36036097, 8299200), frac(4621, 118560), frac(-38434367, 8299200), frac(1, 4)},
             {frac(-247809665162987LL, 146631640500800LL), frac(10604946373579LL, 14663164050080LL),
              frac(10838126175385LL, 5865265620032LL), frac(-24966656214317LL, 36657910125200LL)},
             {frac(38519701, 11618880), frac(10517363, 9682400), frac(-23284701, 19364800),
              frac(-10018609, 2904720), frac(1, 4)},
             {frac(-52907807977903LL, 33838070884800LL), frac(74846944529257LL, 73315820250400LL),
              frac(365022522318171LL, 146631640500800LL), frac(-20513210406809LL, 109973730375600LL),
              frac(-2918009798LL, 1870301537LL)},
             {frac(19, 100), frac(-73, 300), frac(127, 300), frac(127, 300), frac(-313, 300), frac(1, 4)},
             {}},
            11),
        expand_odd_columns<Rational>(
            {{},
             {},
             {frac(-1674554930619LL, 964681845400LL), frac(1674554930619LL, 964681845400LL)},
             {frac(-1007739, 172900), frac(1007739, 172900)},
             {frac(-8450070574289LL, 18328955062600LL), frac(-39429409169LL, 40283417720LL),
              frac(173621393067LL, 120585230675LL)},
             {frac(-122894383, 16598400), frac(14501, 237120), frac(121879313, 16598400)},
             {frac(32410002731287LL, 15434909526400LL), frac(-46499276605921LL, 29326328100160LL),
              frac(-34914135774643LL, 11730531240064LL), frac(45128506783177LL, 18328955062600LL)},
             {frac(-128357303, 23237760), frac(-35433927, 19364800), frac(71038479, 38729600),
              frac(8015933, 1452360)},
             {frac(136721604296777LL, 67676141769600LL), frac(-349632444539303LL, 146631640500800LL),
              frac(-1292744859249609LL, 293263281001600LL), frac(8356250416309LL, 54986865187800LL),
              frac(17282943803LL, 3740603074LL)},
             {frac(3, 25), frac(-29, 300), frac(71, 300), frac(71, 300), frac(-149, 300)},
             {}},
            11)};
    m.gammas.gamma_hat = {
        expand_odd_columns_vec<Rational>({frac(-1, 4), frac(5595, 8804), frac(-2445, 8804),
                                          frac(-4225, 8804), frac(2205, 4402), frac(-567, 4402)},
                                         11),
        Vector<Rational>(11, Rational(0))};
    finalize(m);
    return m;
}

using HVec = Vector<Real50>;
using HMat = Matrix<Real50>;

Real50 compute_esdirk_lambda()
{
    // Newton on -1 + 9l - 18l^2 + 6l^3 from the printed 24-digit seed.
    Real50 l("0.435866521508458999416019");
    for (int it = 0; it < 64; ++it) {
        Real50 f = ((6 * l - 18) * l + 9) * l - 1;
        Real50 df = (18 * l - 36) * l + 9;
        Real50 step = f / df;
        l -= step;
        if (scalar_abs(step) < Real50("1e-49"))
            break;
    }
    return l;
}

MriGarkMethod<Real50> build_esdirk34a()
{
    const Real50 l = esdirk_lambda();
    const Real50 one(1), three(3);
    MriGarkMethod<Real50> m;
    m.name = "mri-esdirk34a";
    m.order = 3;
    m.embedded_order = 2;
    m.kind = MethodKind::decoupled_implicit;
    m.base.c = {Real50(0), one / 3, one / 3, 2 * one / 3, 2 * one / 3, one, one};
    m.base.A = expand_odd_columns<Real50>(
        {{},
         {one / 3},
         {(1 - 3 * l) / 3, l},
         {(-24 * l * l + 4 * l + 1) / (24 * l - 6), (24 * l * l + 12 * l - 5) / (24 * l - 6)},
         {l / (3 - 12 * l), 2 * (6 * l * l - 6 * l + 1) / (3 - 12 * l), l},
         {one / 4, 3 * l, (3 - 12 * l) / 4},
         {(1 - 4 * l) / 4, 3 * l, (3 - 12 * l) / 4, l}},
        7);
    m.base.b = m.base.A[6];

    const Real50 d = 4 * pow(6 * l * l - 6 * l + 1, 2);
    HVec gh0 = expand_odd_columns_vec<Real50>(
        {(((((576 * l + 1152) * l - 2406) * l + 1500) * l - 429) * l + 58) * l / d - three / d,
         -6 * ((((((216 * l + 432) * l - 906) * l + 552) * l - 153) * l + 20) * l - 1) / d,
         3 * (4 * l - 1) * (((((72 * l + 162) * l - 264) * l + 111) * l - 18) * l + 1) / d,
         -4 * l * (((6 * l + 18) * l - 9) * l + 1) * (6 * l * l - 6 * l + 1) / d},
        7);
    // The tabulated embedded weights column disagrees with the tabulated
    // gamma_hat row; the latter is internally consistent, so b_hat follows it.
    HVec bh(7);
    for (int j = 0; j < 7; ++j)
        bh[j] = gh0[j] + m.base.A[6][j];
    m.base.b_hat = bh;

    m.gammas.gamma = {expand_odd_columns<Real50>(
        {{one / 3},
         {-l, l},
         {(3 - 10 * l) / (24 * l - 6), (5 - 18 * l) / (6 - 24 * l)},
         {(-24 * l * l + 6 * l + 1) / (6 - 24 * l), (-48 * l * l + 12 * l + 1) / (24 * l - 6), l},
         {(3 - 16 * l) / (12 - 48 * l), (48 * l * l - 21 * l + 2) / (12 * l - 3), (3 - 16 * l) / 4},
         {-l, Real50(0), Real50(0), l},
         {}},
        7)};
    m.gammas.gamma_hat = {gh0};
    finalize(m);
    return m;
}

MriGarkMethod<Real50> build_sdirk33a()
{
    const Real50 l = esdirk_lambda();
    const Real50 one(1);
    const Real50 c4 = (6 * l * l - 9 * l + 2) / (6 * l * l - 12 * l + 3);
    const Real50 a72 = (1 - 4 * l) / (((-12 * l + 36) * l - 24) * l + 4);
    const Real50 a74 =
        -3 * pow(2 * l * l - 4 * l + 1, 2) / (4 * (((3 * l - 9) * l + 6) * l - 1));
    MriGarkMethod<Real50> m;
    m.name = "mri-sdirk33a";
    m.order = 3;
    m.embedded_order = 2;
    m.kind = MethodKind::decoupled_implicit;
    m.base.c = {Real50(0), l, l, c4, c4, one, one};
    m.base.A = expand_odd_columns<Real50>(
        {{},
         {l},
         {Real50(0), l},
         {Real50(0), c4},
         {Real50(0), c4 - l, l},
         {Real50(0), 3 * l, 1 - 3 * l},
         {Real50(0), a72, a74, l}},
        7);
    m.base.b = m.base.A[6];
    m.base.b_hat = expand_odd_columns_vec<Real50>(
        {Real50(0), 1 / (2 - 2 * l), Real50(0), (1 - 2 * l) / (2 - 2 * l)}, 7);
    m.base.dc = stage_increments(m.base.c);

    // The reference coupling table for this scheme duplicates the ESDIRK34a
    // block and is inconsistent with its own abscissae. Rebuild: gamma_bar is
    // fixed by the base tableau; a single degree-1 row with zero sum restores
    // the third order coupling condition, and Gamma^0 = gamma_bar - Gamma^1/2.
    HMat gbar = zero_matrix<Real50>(7, 7);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 7; ++j)
            gbar[i][j] = m.base.A[i + 1][j] - m.base.A[i][j];
    for (int j = 0; j < 7; ++j)
        gbar[6][j] = m.base.b[j] - m.base.A[6][j];

    Real50 coupling3(0);
    for (int i = 0; i < 7; ++i) {
        Real50 row(0);
        for (int j = 0; j < 7; ++j)
            row += (m.base.A[i][j] + gbar[i][j] / 2) * m.base.c[j];
        coupling3 += m.base.dc[i] * row;
    }
    const Real50 w = -12 * (coupling3 - one / 6) / (l * (c4 - l));

    HMat g1 = zero_matrix<Real50>(7, 7);
    g1[2][0] = w;
    g1[2][2] = -w;
    HMat g0 = gbar;
    g0[2][0] -= w / 2;
    g0[2][2] += w / 2;
    m.gammas.gamma = {g0, g1};

    HVec gh0(7, Real50(0));
    for (int j = 0; j < 7; ++j)
        gh0[j] = (*m.base.b_hat)[j] - m.base.A[6][j];
    m.gammas.gamma_hat = {gh0, HVec(7, Real50(0))};
    finalize(m);
    return m;
}

std::map<std::string, ExactMethod> build_all()
{
    std::map<std::string, ExactMethod> reg;
    auto erk22a = make_erk22(frac(1, 2));
    erk22a.name = "mri-erk22a";
    auto erk22b = make_erk22(Rational(1));
    erk22b.name = "mri-erk22b";
    auto erk33a = make_erk33(frac(-1, 2));
    erk33a.name = "mri-erk33a";
    reg.emplace("mri-erk22a", erk22a);
    reg.emplace("mri-erk22b", erk22b);
    reg.emplace("mri-erk33a", erk33a);
    reg.emplace("mri-erk45a", build_erk45a());
    reg.emplace("mri-irk21a", build_irk21a());
    reg.emplace("mri-esdirk34a", build_esdirk34a());
    reg.emplace("mri-sdirk33a", build_sdirk33a());
    reg.emplace("mri-esdirk46a", build_esdirk46a());
    return reg;
}

const std::map<std::string, ExactMethod>& registry()
{
    static const std::map<std::string, ExactMethod> reg = build_all();
    return reg;
}

} // namespace

const Real50& esdirk_lambda()
{
    static const Real50 l = compute_esdirk_lambda();
    return l;
}

MriGarkMethod<Rational> make_erk22(const Rational& c2)
{
    if (c2 <= 0 || c2 > 1)
        throw RegistryError("erk22 family requires c2 in (0,1]");
    MriGarkMethod<Rational> m;
    m.name = "mri-erk22(c2=" + to_fraction_string(c2) + ")";
    m.order = 2;
    m.embedded_order = 1;
    m.kind = MethodKind::explicit_method;
    m.base.c = rvec({0, c2});
    m.base.A = {{0, 0}, {c2, 0}};
    m.base.b = rvec({(2 * c2 - 1) / (2 * c2), 1 / (2 * c2)});
    m.base.b_hat = rvec({1, 0});
    m.gammas.gamma = {RMat{{c2, 0}, {-(2 * c2 * c2 - 2 * c2 + 1) / (2 * c2), 1 / (2 * c2)}}};
    m.gammas.gamma_hat = {rvec({1 - c2, 0})};
    finalize(m);
    return m;
}

MriGarkMethod<Rational> make_erk33(const Rational& delta)
{
    MriGarkMethod<Rational> m;
    m.name = "mri-erk33(delta=" + to_fraction_string(delta) + ")";
    m.order = 3;
    m.embedded_order = 2;
    m.kind = MethodKind::explicit_method;
    m.base.c = rvec({0, frac(1, 3), frac(2, 3)});
    m.base.A = zero_matrix<Rational>(3, 3);
    m.base.A[1][0] = frac(1, 3);
    m.base.A[2][1] = frac(2, 3);
    m.base.b = rvec({frac(1, 4), 0, frac(3, 4)});
    m.base.b_hat = rvec({frac(1, 12), frac(1, 3), frac(7, 12)});
    RMat g0 = zero_matrix<Rational>(3, 3);
    g0[0][0] = frac(1, 3);
    g0[1][0] = (-6 * delta - 7) / 12;
    g0[1][1] = (6 * delta + 11) / 12;
    g0[2][1] = (6 * delta - 5) / 12;
    g0[2][2] = (3 - 2 * delta) / 4;
    RMat g1 = zero_matrix<Rational>(3, 3);
    g1[1][0] = (2 * delta + 1) / 2;
    g1[1][1] = -(2 * delta + 1) / 2;
    g1[2][0] = frac(1, 2);
    g1[2][1] = -(2 * delta + 1) / 2;
    g1[2][2] = delta;
    m.gammas.gamma = {g0, g1};
    m.gammas.gamma_hat = {rvec({frac(1, 12), frac(-1, 3), frac(7, 12)}),
                          Vector<Rational>(3, Rational(0))};
    finalize(m);
    return m;
}

std::vector<std::string> builtin_names()
{
    std::vector<std::string> names;
    for (const auto& [name, method] : registry())
        names.push_back(name);
    return names;
}

std::vector<MethodInfo> builtin_infos()
{
    std::vector<MethodInfo> infos;
    for (const auto& [name, method] : registry()) {
        MethodInfo info;
        info.name = name;
        std::visit(
            [&](const auto& m) {
                info.order = m.order;
                info.embedded_order = m.embedded_order;
                info.stages = m.stages();
                info.kind = m.kind;
            },
            method);
        infos.push_back(info);
    }
    return infos;
}

ExactMethod builtin_exact(const std::string& name)
{
    const auto& reg = registry();
    auto it = reg.find(name);
    if (it == reg.end()) {
        std::string msg = "unknown method '" + name + "'; available:";
        for (const auto& [n, m] : reg)
            msg += " " + n;
        throw RegistryError(msg);
    }
    return it->second;
}

MriGarkMethod<double> to_double_method(const ExactMethod& m)
{
    return std::visit([](const auto& em) { return convert_method<double>(em); }, m);
}

MriGarkMethod<double> builtin(const std::string& name)
{
    return to_double_method(builtin_exact(name));
}

} // namespace mrigark
