#pragma once

// Symmetric positive-weight rules on the unit-measure triangle, exact for the
// degree in each table name. Orbit weights are totals over the orbit.

namespace esdg::detail {

enum class OrbitKind { centroid, s21, s111 };

struct TriangleOrbit {
  OrbitKind kind;
  double a;
  double b;
  double weight;
};

// Generated by tools/gen_triangle_rules.py; do not edit by hand.
inline constexpr TriangleOrbit kDegree1[] = {
    {OrbitKind::centroid, 0.0, 0.0, 1.0},
};
inline constexpr TriangleOrbit kDegree2[] = {
    {OrbitKind::s21, 0.16666666666666666667, 0.0, 1.0},
};
inline constexpr TriangleOrbit kDegree4[] = {
    {OrbitKind::s21, 0.44594849091596488632, 0.0, 0.67014476903403439709},
    {OrbitKind::s21, 0.09157621350977074346, 0.0, 0.32985523096596560291},
};
inline constexpr TriangleOrbit kDegree5[] = {
    {OrbitKind::centroid, 0.0, 0.0, 0.225},
    {OrbitKind::s21, 0.47014206410511508977, 0.0, 0.39718245836551854221},
    {OrbitKind::s21, 0.1012865073234563388, 0.0, 0.37781754163448145779},
};
inline constexpr TriangleOrbit kDegree6[] = {
    {OrbitKind::s21, 0.24928674517091042129, 0.0, 0.35035882717913809808},
    {OrbitKind::s21, 0.06308901449150222834, 0.0, 0.15253471911062045076},
    {OrbitKind::s111, 0.31035245103378440542, 0.63650249912139864723, 0.49710645371024145116},
};
inline constexpr TriangleOrbit kDegree8[] = {
    {OrbitKind::centroid, 0.0, 0.0, 0.14431560767778716825},
    {OrbitKind::s21, 0.17056930775176020662, 0.0, 0.30965211160415475085},
    {OrbitKind::s21, 0.050547228317030975458, 0.0, 0.097375492869594240933},
    {OrbitKind::s21, 0.45929258829272315603, 0.0, 0.28527490280185387438},
    {OrbitKind::s111, 0.26311282963463811342, 0.72849239295540428124, 0.16338188504660996559},
};
inline constexpr TriangleOrbit kDegree9[] = {
    {OrbitKind::centroid, 0.0, 0.0, 0.097135796282798833819},
    {OrbitKind::s21, 0.48968251919873762778, 0.0, 0.094004100681417211611},
    {OrbitKind::s21, 0.43708959149293663727, 0.0, 0.23348262301432283795},
    {OrbitKind::s21, 0.18820353561903273024, 0.0, 0.2389432167816307591},
    {OrbitKind::s21, 0.044729513394452709865, 0.0, 0.076733026976094093785},
    {OrbitKind::s111, 0.22196298916076569568, 0.74119859878449802069, 0.25970123626373626374},
};
inline constexpr TriangleOrbit kDegree10[] = {
    {OrbitKind::centroid, 0.0, 0.0, 0.090817990382753580095},
    {OrbitKind::s21, 0.48557763338365737737, 0.0, 0.11017787326940011415},
    {OrbitKind::s21, 0.1094815754850370548, 0.0, 0.13596317830658380435},
    {OrbitKind::s111, 0.14170721941487995476, 0.30793983876412095017, 0.43654750107252065163},
    {OrbitKind::s111, 0.025003534762686386074, 0.24667256063990269392, 0.16996345518634490902},
    {OrbitKind::s111, 0.0095408154002994575802, 0.066803251012200265774, 0.05653000178239694076},
};
inline constexpr TriangleOrbit kDegree12[] = {
    {OrbitKind::s21, 0.48821738977380488256, 0.0, 0.077193199321366006253},
    {OrbitKind::s21, 0.43972439229446027298, 0.0, 0.13107763361411520641},
    {OrbitKind::s21, 0.27121038501211592235, 0.0, 0.18857467265365530106},
    {OrbitKind::s21, 0.12757614554158592467, 0.0, 0.10438833879212682897},
    {OrbitKind::s21, 0.021317350453210370247, 0.0, 0.018498783154677051702},
    {OrbitKind::s111, 0.11534349453469799917, 0.27571326968551419397, 0.24222934659828557711},
    {OrbitKind::s111, 0.02283833222225702961, 0.28132558098993954825, 0.13414063921382067427},
    {OrbitKind::s111, 0.025734050548330228168, 0.11625191590759714124, 0.10389738665195335423},
};

}  // namespace esdg::detail
