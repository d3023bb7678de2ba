#include "mrigark/method_json.hpp"

#include <fstream>

namespace mrigark {

namespace {

using nlohmann::json;

json entry_to_json(const Rational& x) { return to_fraction_string(x); }
json entry_to_json(const Real50& x) { return to_decimal_string(x); }

template <class T>
json vec_to_json(const Vector<T>& v)
{
    json out = json::array();
    for (const T& x : v)
        out.push_back(entry_to_json(x));
    return out;
}

template <class T>
json mat_to_json(const Matrix<T>& m)
{
    json out = json::array();
    for (const auto& row : m)
        out.push_back(vec_to_json(row));
    return out;
}

template <class T>
json method_to_json_impl(const MriGarkMethod<T>& m)
{
    json j;
    j["name"] = m.name;
    j["order"] = m.order;
    j["embedded_order"] = m.embedded_order;
    j["kind"] = kind_name(m.kind);
    j["c"] = vec_to_json(m.base.c);
    j["A"] = mat_to_json(m.base.A);
    j["b"] = vec_to_json(m.base.b);
    j["b_hat"] = m.base.b_hat ? vec_to_json(*m.base.b_hat) : json();
    j["gamma"] = json::array();
    for (const auto& g : m.gammas.gamma)
        j["gamma"].push_back(mat_to_json(g));
    j["gamma_hat"] = json::array();
    for (const auto& gh : m.gammas.gamma_hat)
        j["gamma_hat"].push_back(vec_to_json(gh));
    return j;
}

bool entry_is_rational(const json& e)
{
    if (e.is_number_integer())
        return true;
    if (!e.is_string())
        return false;
    const std::string s = e.get<std::string>();
    return s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
           s.find('E') == std::string::npos;
}

Rational entry_to_rational(const json& e)
{
    if (e.is_number_integer())
        return Rational(e.get<long long>());
    return parse_fraction(e.get<std::string>());
}

Real50 entry_to_real50(const json& e)
{
    if (e.is_number_integer())
        return Real50(e.get<long long>());
    if (e.is_number())
        return Real50(e.get<double>());
    const std::string s = e.get<std::string>();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational r = parse_fraction(s);
        return scalar_cast<Real50>(r);
    }
    return Real50(s);
}

template <class T, class Conv>
MriGarkMethod<T> method_from_json_impl(const json& j, Conv conv)
{
    MriGarkMethod<T> m;
    m.name = j.at("name").get<std::string>();
    m.order = j.at("order").get<int>();
    m.embedded_order = j.value("embedded_order", 0);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "explicit")
        m.kind = MethodKind::explicit_method;
    else if (kind == "decoupled_implicit")
        m.kind = MethodKind::decoupled_implicit;
    else
        throw RegistryError("unknown method kind '" + kind + "'");

    auto to_vec = [&](const json& a) {
        Vector<T> v;
        for (const auto& e : a)
            v.push_back(conv(e));
        return v;
    };
    auto to_mat = [&](const json& a) {
        Matrix<T> mt;
        for (const auto& row : a)
            mt.push_back(to_vec(row));
        return mt;
    };
    m.base.c = to_vec(j.at("c"));
    m.base.A = to_mat(j.at("A"));
    m.base.b = to_vec(j.at("b"));
    if (j.contains("b_hat") && !j.at("b_hat").is_null())
        m.base.b_hat = to_vec(j.at("b_hat"));
    for (const auto& g : j.at("gamma"))
        m.gammas.gamma.push_back(to_mat(g));
    if (j.contains("gamma_hat"))
        for (const auto& gh : j.at("gamma_hat"))
            m.gammas.gamma_hat.push_back(to_vec(gh));
    m.base.dc = stage_increments(m.base.c);
    if constexpr (std::is_same_v<T, Rational>)
        validate_method(m, Rational(0));
    else
        validate_method(m, scalar_cast<T>(1e-12));
    return m;
}

bool json_all_rational(const json& j)
{
    for (const char* key : {"c", "b"})
        for (const auto& e : j.at(key))
            if (!entry_is_rational(e))
                return false;
    for (const auto& row : j.at("A"))
        for (const auto& e : row)
            if (!entry_is_rational(e))
                return false;
    if (j.contains("b_hat") && !j.at("b_hat").is_null())
        for (const auto& e : j.at("b_hat"))
            if (!entry_is_rational(e))
                return false;
    for (const auto& g : j.at("gamma"))
        for (const auto& row : g)
            for (const auto& e : row)
                if (!entry_is_rational(e))
                    return false;
    if (j.contains("gamma_hat"))
        for (const auto& gh : j.at("gamma_hat"))
            for (const auto& e : gh)
                if (!entry_is_rational(e))
                    return false;
    return true;
}

} // namespace

json method_to_json(const ExactMethod& m)
{
    return std::visit([](const auto& em) { return method_to_json_impl(em); }, m);
}

ExactMethod method_from_json(const json& j)
{
    if (json_all_rational(j))
        return method_from_json_impl<Rational>(j, entry_to_rational);
    return method_from_json_impl<Real50>(j, entry_to_real50);
}

ExactMethod load_method_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw RegistryError("cannot open method file '" + path + "'");
    json j;
    in >> j;
    return method_from_json(j);
}

} // namespace mrigark
