//! Precomputed quadrature node/weight tables.
//!
//! `LOG8`/`LOG16`: correction nodes and weights for the hybrid
//! Gauss-trapezoidal rules handling a logarithmic singularity at a grid
//! node of a periodic trapezoid mesh (band `A`, nodes scaled by the grid
//! spacing).  They satisfy the moment conditions
//! `sum w x^p = -zeta(-p, A)` and `sum w x^p ln x = zeta'(-p, A)`
//! for p up to order-2, zeta the Hurwitz zeta function.
//!
//! `GL15`/`K15`/`G7`: 15-point Gauss-Legendre panel and the embedded
//! Gauss-Kronrod pair on [-1, 1].

pub const LOG8_A: usize = 6;
pub const LOG8_X: [f64; 7] = [
    0.008726295714627151355837,
    0.1213552103401668298800,
    0.5294921934545036154534,
    1.368660789416366438770,
    2.573865195211093744965,
    3.867705928915246370735,
    4.990928361578598426947,
];
pub const LOG8_W: [f64; 7] = [
    0.03289239841273566864202,
    0.2271516795647105519693,
    0.6144024848414928665452,
    1.053537932050639478871,
    1.307061723276206703391,
    1.228785872998716928031,
    1.036167908855497802551,
];
pub const LOG16_A: usize = 12;
pub const LOG16_X: [f64; 15] = [
    0.001101714708204890417391,
    0.01631154599819672861534,
    0.07909636323901110182950,
    0.2377458269493488456067,
    0.5454834220901153368327,
    1.048982067968673192419,
    1.777217935170334937192,
    2.732552297150878712790,
    3.885606130030901941474,
    5.174972290950508308364,
    6.512539718955581712101,
    7.797527249476165386348,
    8.954126850307953367961,
    9.996248947332677587551,
    10.99994341198103249897,
];
pub const LOG16_W: [f64; 15] = [
    0.004199374182504508737229,
    0.03189862387941041543124,
    0.1018880621553990388194,
    0.2244775493370872757114,
    0.3989668520105455901880,
    0.6130122544499440807735,
    0.8439409169726113115877,
    1.061837362830310475696,
    1.233950760176940252018,
    1.329891325246385737602,
    1.327907167516744714924,
    1.228007881895365952841,
    1.087730815102121468682,
    1.011980096852731900804,
    1.000310957391897276185,
];
pub const K15_X: [f64; 15] = [
    -0.9914553711208126392069,
    -0.9491079123427585245262,
    -0.8648644233597690727897,
    -0.7415311855993944398639,
    -0.5860872354676911302941,
    -0.4058451513773971669066,
    -0.2077849550078984676007,
    0.0,
    0.2077849550078984676007,
    0.4058451513773971669066,
    0.5860872354676911302941,
    0.7415311855993944398639,
    0.8648644233597690727897,
    0.9491079123427585245262,
    0.9914553711208126392069,
];
pub const K15_W: [f64; 15] = [
    0.02293532201052922496373,
    0.06309209262997855329070,
    0.1047900103222501838399,
    0.1406532597155259187452,
    0.1690047266392679028266,
    0.1903505780647854099133,
    0.2044329400752988924142,
    0.2094821410847278280130,
    0.2044329400752988924142,
    0.1903505780647854099133,
    0.1690047266392679028266,
    0.1406532597155259187452,
    0.1047900103222501838399,
    0.06309209262997855329070,
    0.02293532201052922496373,
];
pub const G7_W: [f64; 7] = [
    0.1294849661688696932706,
    0.2797053914892766679015,
    0.3818300505051189449504,
    0.4179591836734693877551,
    0.3818300505051189449504,
    0.2797053914892766679015,
    0.1294849661688696932706,
];
pub const GL15_X: [f64; 15] = [
    -0.9879925180204854284896,
    -0.9372733924007059043078,
    -0.8482065834104272162006,
    -0.7244177313601700474162,
    -0.5709721726085388475372,
    -0.3941513470775633698972,
    -0.2011940939974345223006,
    0.0,
    0.2011940939974345223006,
    0.3941513470775633698972,
    0.5709721726085388475372,
    0.7244177313601700474162,
    0.8482065834104272162006,
    0.9372733924007059043078,
    0.9879925180204854284896,
];
pub const GL15_W: [f64; 15] = [
    0.03075324199611726835463,
    0.07036604748810812470927,
    0.1071592204671719350119,
    0.1395706779261543144478,
    0.1662692058169939335532,
    0.1861610000155622110268,
    0.1984314853271115764561,
    0.2025782419255612728806,
    0.1984314853271115764561,
    0.1861610000155622110268,
    0.1662692058169939335532,
    0.1395706779261543144478,
    0.1071592204671719350119,
    0.07036604748810812470927,
    0.03075324199611726835463,
];
