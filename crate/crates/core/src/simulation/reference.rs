//! Published rejection frequencies, 1000 replicates per cell, rows ordered
//! by π₀ ∈ {0.01, 0.05, 0.1, 0.2} and then n ∈ {50, 100, 500, 1000, 5000,
//! 10000}, columns in the order of [`super::TableId::columns`].

pub(super) const PI0_ROWS: [f64; 4] = [0.01, 0.05, 0.1, 0.2];
pub(super) const N_ROWS: [usize; 6] = [50, 100, 500, 1000, 5000, 10000];

pub(super) const T1_VALUES: [[f64; 9]; 24] = [
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.016, 0.071, 0.183],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.008, 0.924, 0.939, 0.995],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.021, 0.999, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.001, 0.010, 0.152, 0.532, 0.589, 0.698],
    [0.000, 0.000, 0.000, 0.011, 0.155, 0.491, 0.946, 0.952, 0.979],
    [0.000, 0.000, 0.000, 0.025, 0.996, 1.000, 1.000, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.036, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.004, 0.006, 0.024, 0.045, 0.048, 0.075],
    [0.000, 0.002, 0.010, 0.087, 0.151, 0.296, 0.480, 0.499, 0.559],
    [0.000, 0.021, 0.706, 0.880, 0.997, 0.996, 1.000, 1.000, 1.000],
    [0.000, 0.022, 0.985, 0.994, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.000, 0.047, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.000, 0.041, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000],
];

pub(super) const T2_VALUES: [[f64; 9]; 24] = [
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.003, 0.007, 0.015, 0.017],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.005, 0.016],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.001, 0.007],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.003, 0.016],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.012, 0.051],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.023, 0.117],
    [0.000, 0.000, 0.000, 0.001, 0.000, 0.003, 0.005, 0.011, 0.017],
    [0.000, 0.000, 0.000, 0.001, 0.000, 0.007, 0.020, 0.036, 0.039],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.015, 0.100, 0.105, 0.147],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.022, 0.206, 0.231, 0.360],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.023, 0.948, 0.973, 0.998],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.025, 1.000, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.011, 0.010, 0.042, 0.063, 0.064, 0.080],
    [0.000, 0.000, 0.000, 0.011, 0.019, 0.033, 0.123, 0.124, 0.137],
    [0.000, 0.000, 0.000, 0.017, 0.151, 0.216, 0.606, 0.693, 0.761],
    [0.000, 0.000, 0.000, 0.025, 0.337, 0.523, 0.961, 0.957, 0.979],
    [0.000, 0.000, 0.000, 0.028, 0.993, 0.999, 1.000, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.033, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.000, 0.015, 0.048, 0.101, 0.151, 0.171, 0.273, 0.295, 0.288],
    [0.000, 0.013, 0.118, 0.175, 0.369, 0.406, 0.580, 0.614, 0.643],
    [0.000, 0.020, 0.770, 0.880, 0.993, 0.993, 1.000, 0.999, 1.000],
    [0.000, 0.033, 0.988, 0.995, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.000, 0.038, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.000, 0.032, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000],
];

pub(super) const T3_VALUES: [[f64; 9]; 24] = [
    [0.000, 0.000, 0.000, 0.003, 0.001, 0.012, 0.019, 0.034, 0.038],
    [0.000, 0.000, 0.000, 0.001, 0.000, 0.005, 0.015, 0.027, 0.028],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.001, 0.016, 0.028, 0.049],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.013, 0.030, 0.063],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.019, 0.038, 0.136],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.013, 0.051, 0.277],
    [0.000, 0.000, 0.000, 0.009, 0.015, 0.042, 0.062, 0.067, 0.093],
    [0.000, 0.000, 0.000, 0.006, 0.008, 0.038, 0.065, 0.098, 0.106],
    [0.000, 0.000, 0.000, 0.003, 0.007, 0.058, 0.208, 0.220, 0.332],
    [0.000, 0.000, 0.000, 0.001, 0.009, 0.039, 0.415, 0.426, 0.566],
    [0.000, 0.000, 0.000, 0.000, 0.003, 0.057, 0.978, 0.987, 1.000],
    [0.000, 0.000, 0.000, 0.000, 0.006, 0.050, 1.000, 1.000, 1.000],
    [0.000, 0.005, 0.003, 0.030, 0.054, 0.089, 0.137, 0.138, 0.134],
    [0.000, 0.001, 0.007, 0.052, 0.076, 0.121, 0.246, 0.250, 0.266],
    [0.000, 0.000, 0.007, 0.040, 0.337, 0.387, 0.801, 0.830, 0.876],
    [0.000, 0.000, 0.005, 0.056, 0.589, 0.661, 0.976, 0.985, 0.997],
    [0.000, 0.000, 0.003, 0.057, 0.999, 1.000, 1.000, 1.000, 1.000],
    [0.000, 0.000, 0.008, 0.058, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.007, 0.051, 0.130, 0.172, 0.321, 0.350, 0.483, 0.469, 0.508],
    [0.003, 0.068, 0.280, 0.339, 0.541, 0.600, 0.758, 0.761, 0.798],
    [0.004, 0.051, 0.888, 0.928, 1.000, 0.997, 1.000, 1.000, 1.000],
    [0.002, 0.050, 0.999, 0.999, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.002, 0.054, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.004, 0.045, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000],
];

pub(super) const T4_VALUES: [[f64; 9]; 24] = [
    [0.045, 0.039, 0.052, 0.060, 0.111, 0.159, 0.302, 0.485, 0.824],
    [0.022, 0.031, 0.040, 0.066, 0.107, 0.199, 0.450, 0.848, 0.986],
    [0.021, 0.026, 0.045, 0.210, 0.477, 0.951, 1.000, 1.000, 1.000],
    [0.011, 0.028, 0.047, 0.441, 0.774, 1.000, 1.000, 1.000, 1.000],
    [0.002, 0.017, 0.049, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.001, 0.005, 0.047, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000],
    [0.015, 0.010, 0.016, 0.023, 0.052, 0.056, 0.142, 0.253, 0.600],
    [0.004, 0.007, 0.009, 0.014, 0.031, 0.069, 0.186, 0.518, 0.885],
    [0.000, 0.001, 0.002, 0.009, 0.047, 0.211, 0.664, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.001, 0.060, 0.606, 0.954, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.001, 0.040, 1.000, 1.000, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.000, 0.056, 1.000, 1.000, 1.000, 1.000],
    [0.001, 0.002, 0.005, 0.004, 0.007, 0.009, 0.027, 0.079, 0.274],
    [0.000, 0.003, 0.000, 0.001, 0.002, 0.010, 0.031, 0.163, 0.520],
    [0.000, 0.000, 0.000, 0.000, 0.001, 0.002, 0.056, 0.958, 0.999],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.001, 0.035, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.056, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.057, 1.000, 1.000],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.001, 0.004, 0.004, 0.029],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.002, 0.051],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.001, 0.044],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.001, 0.052],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.053],
    [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.040],
];
