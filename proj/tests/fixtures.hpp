// Frozen expected values computed by an independent elementwise
// evaluator (tests/oracle/gen_fixtures.py). Do not edit by hand.
#pragma once
#include <vector>
namespace klsnmf::fixtures {

// 5x5, k=2 single-step fixture; lambda=0.7, eps=1e-10
inline constexpr double step5_lambda = 0.7;
inline constexpr double step5_eps = 1e-10;
inline const std::vector<std::vector<double>> step5_kernel = {
    {1, 0.64531857896467359, 0.69607638551112661, 0.31716239971302118, 0.56719034449879258},
    {0.64531857896467359, 1, 0.22782006845554231, 0.24006200604757674, 0.65203415159359635},
    {0.69607638551112661, 0.22782006845554231, 1, 0.36719000705080174, 0.32609379285215778},
    {0.31716239971302118, 0.24006200604757674, 0.36719000705080174, 1, 0.62694727608793677},
    {0.56719034449879258, 0.65203415159359635, 0.32609379285215778, 0.62694727608793677, 1}};

inline const std::vector<std::vector<double>> step5_w0 = {
    {0.61687363654122307, 0.27453186426501575},
    {0.93141789476610937, 0.25455124149226144},
    {0.49185779458397855, 0.47507371684324046},
    {0.50682023047806912, 0.26495065917269967},
    {0.20273078916356768, 0.39038263100810705}};

inline const std::vector<std::vector<double>> step5_g0 = {
    {0.37462278127536991, 0.98829025054949238},
    {0.96144414099359332, 0.53848553191795612},
    {0.47024242173346986, 0.80237013866659901},
    {0.36405768941056271, 0.1113200273223664},
    {0.059523765305896398, 0.74622118935027848}};

inline const std::vector<std::vector<double>> step5_w1 = {
    {0.33059870552365678, 0.16761308661580096},
    {0.51603270358716724, 0.13924517229088629},
    {0.23509061870107262, 0.26650078215300105},
    {0.22451528591257669, 0.12065793553582708},
    {0.10205179540721793, 0.21680424675943669}};

inline const std::vector<std::vector<double>> step5_g1 = {
    {0.38427398221250542, 1.0103500653684392},
    {0.97677096732202562, 0.5345477237877464},
    {0.45086601870855941, 0.79926516694010874},
    {0.32239950869097311, 0.10527382499368404},
    {0.059172626500181388, 0.75265276569076178}};

// 6x6, k=3 objective fixture; lambda=1
inline const std::vector<std::vector<double>> obj6_kernel = {
    {1, 0.44047384701839781, 0.33322886449531686, 0.63035916716335982, 0.74382287644852696, 0.53603549472980028},
    {0.44047384701839781, 1, 0.38712151634025349, 0.11744198640326863, 0.48914332101601499, 0.64104385222588023},
    {0.33322886449531686, 0.38712151634025349, 1, 0.16556371208294396, 0.73438698870961672, 0.16363567841404136},
    {0.63035916716335982, 0.11744198640326863, 0.16556371208294396, 1, 0.50271669178862022, 0.17736521825264315},
    {0.74382287644852696, 0.48914332101601499, 0.73438698870961672, 0.50271669178862022, 1, 0.37168925467416547},
    {0.53603549472980028, 0.64104385222588023, 0.16363567841404136, 0.17736521825264315, 0.37168925467416547, 1}};

inline const std::vector<std::vector<double>> obj6_w = {
    {0.21117843993007079, 0.044345561151971191, 0.53394583350387981},
    {0.6372024876475284, 0.79975795201592426, 0.2729154460644222},
    {0.38729092949763966, 0.64322863309702305, 0.33151140747385932},
    {0.075316591235549568, 0.38984028695765327, 0.64288822210454333},
    {0.45769551573472878, 0.91700802057280917, 0.76934505663486552},
    {0.081236847869854079, 0.6549981073850426, 0.57341842678335042}};

inline const std::vector<std::vector<double>> obj6_g = {
    {0.49406439631758392, 0.9717065872594296, 0.30481554826326662},
    {0.16268308712183466, 0.19212645154775809, 0.65914370047239967},
    {0.16814649157453032, 0.20494975269549887, 0.68357065397044225},
    {0.85474398225745307, 0.57228783459451704, 0.065573991758583916},
    {0.39688160673443695, 0.47608123840461769, 0.50198601462207038},
    {0.83556475550695897, 0.30409558590481001, 0.90037356172118954}};

inline constexpr double obj6_value = 43.36361773941637;

// linear kernel fixture: 2 features x 3 samples, dyadic entries
inline const std::vector<std::vector<double>> lin3_x = {
    {0.5, 1.25, 0.75},
    {2, 0.25, 1.5}};

inline const std::vector<std::vector<double>> lin3_kernel = {
    {4.25, 1.125, 3.375},
    {1.125, 1.625, 1.3125},
    {3.375, 1.3125, 2.8125}};

// nmi oracle for truth [0,0,1,1] vs pred [0,1,1,1]
inline constexpr double nmi_2x2_value = 0.31127812445913283;

} // namespace klsnmf::fixtures
