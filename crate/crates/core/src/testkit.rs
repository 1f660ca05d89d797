//! Shared fixtures for unit tests: small codes and supports that several
//! modules exercise from different angles.

use crate::caps::Caps;
use crate::code::{Code, Vector};
use crate::ring::RingSpec;
use crate::support::{Support, SupportSpec};

pub fn caps() -> Caps {
    Caps::default()
}

pub fn spec_json(s: &str) -> SupportSpec {
    serde_json::from_str(s).unwrap()
}

pub fn zm_vec(ring: &RingSpec, xs: &[u64]) -> Vector {
    xs.iter().map(|&x| ring.elem_from_int(x).unwrap()).collect()
}

pub fn zm_code(ring: &RingSpec, n: usize, gens: &[&[u64]]) -> Code {
    Code::new(ring, n, gens.iter().map(|g| zm_vec(ring, g)).collect()).unwrap()
}

pub fn hamming(ring: &RingSpec, n: usize) -> Support {
    Support::compile(ring, n, &spec_json(r#"{"kind":"hamming"}"#), &caps()).unwrap()
}

/// The running example over Z_6^3: the code generated by (3,1,2) and
/// (2,4,3), measured through the composition of the coordinatewise
/// two-factor support (2 on the Z_2 side, 1 on the Z_3 side) with an
/// invertible 3x3 matrix. Weight profile M=4, d=(1,3,5,9).
pub fn z6_fixture() -> (RingSpec, Code, Support) {
    let ring = RingSpec::zm(6).unwrap();
    let code = zm_code(&ring, 3, &[&[3, 1, 2], &[2, 4, 3]]);
    let spec = spec_json(
        r#"{"kind":"compose_linear",
            "matrix":[[3,4,1],[5,3,3],[2,4,5]],
            "inner":{"kind":"product","parts":[
                {"kind":"pir","values":[[[2]],[[1]]]},
                {"kind":"pir","values":[[[2]],[[1]]]},
                {"kind":"pir","values":[[[2]],[[1]]]}]}}"#,
    );
    let supp = Support::compile(&ring, 3, &spec, &caps()).unwrap();
    (ring, code, supp)
}

/// The Lee-weight example over Z_4^3: sixteen codewords; the Lee weight is
/// a deliberate pseudo-support (fails join subadditivity).
pub fn lee_fixture() -> (RingSpec, Code, Support) {
    let ring = RingSpec::zm(4).unwrap();
    let code = zm_code(&ring, 3, &[&[1, 1, 0], &[3, 2, 1]]);
    let supp = Support::compile(&ring, 3, &spec_json(r#"{"kind":"lee"}"#), &caps()).unwrap();
    (ring, code, supp)
}

/// The even-weight code in F_2^4 with the Hamming support: eight words,
/// M=3, d=(2,3,4), circuits = all 2-subsets.
pub fn even_weight_fixture() -> (RingSpec, Code, Support) {
    let ring = RingSpec::zm(2).unwrap();
    let code = zm_code(&ring, 4, &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1]]);
    let supp = hamming(&ring, 4);
    (ring, code, supp)
}

/// The pathological table support on F_2^2: a genuine support that is not
/// modular (sigma(1,0)=(1,1) cannot be reduced against sigma(0,1)=(0,1)).
pub fn pathological_fixture() -> (RingSpec, Code, Support) {
    let ring = RingSpec::zm(2).unwrap();
    let code = zm_code(&ring, 2, &[&[1, 0], &[0, 1]]);
    let spec = spec_json(
        r#"{"kind":"table","entries":{
            "0,0":[0,0],"1,0":[1,1],"0,1":[0,1],"1,1":[1,1]}}"#,
    );
    let supp = Support::compile(&ring, 2, &spec, &caps()).unwrap();
    (ring, code, supp)
}
