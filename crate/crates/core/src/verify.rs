//! Built-in reproduction suite: the worked examples for nilpotent arguments
//! and the five functions at the order-3 exceptional point `H = 2I + J_3(0)`,
//! each compared against literal expected values.

use serde::{Deserialize, Serialize};

use crate::calculus::evaluate_series;
use crate::depth::{analyze_depth, Mechanism};
use crate::ep::{apply_function_at_ep, ep_decompose, evaluate_at_ep, evolution_at};
use crate::error::Result;
use crate::function::FunctionSpec;
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;
use crate::series::{Order, TruncSeries};

type G = GaussianRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthRow {
    pub contact_order: Order,
    pub bound: usize,
    pub effective_index: usize,
    pub mechanism: Mechanism,
}

impl DepthRow {
    const fn new(r: Order, bound: usize, effective_index: usize, mechanism: Mechanism) -> Self {
        Self {
            contact_order: r,
            bound,
            effective_index,
            mechanism,
        }
    }
}

/// A named matrix identity checked alongside the depth row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub what: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub case: String,
    pub function: String,
    pub observed: DepthRow,
    pub expected: DepthRow,
    pub checks: Vec<Check>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.observed == self.expected && self.checks.iter().all(|c| c.ok)
    }
}

const FIN: fn(usize) -> Order = Order::Finite;

fn g(s: &str) -> G {
    s.parse().expect("literal scalar")
}

fn mat(rows: &[&[&str]]) -> Matrix<G> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|c| g(c)).collect()).collect()).expect("square literal")
}

fn check(what: &str, ok: bool) -> Check {
    Check {
        what: what.to_string(),
        ok,
    }
}

fn spec(json: &str) -> FunctionSpec {
    FunctionSpec::parse_json(json).expect("literal spec")
}

fn nilpotent_case(
    case: &str,
    function: &FunctionSpec,
    n: &Matrix<G>,
    expected: DepthRow,
    value_check: Option<(&str, Matrix<G>)>,
) -> Result<CaseOutcome> {
    let m = n.nilpotency_index()?.index - 1;
    let series = function.series_at(&G::default(), m)?;
    let report = analyze_depth(&series, n)?;
    let mut checks = Vec::new();
    if let Some((what, want)) = value_check {
        checks.push(check(what, evaluate_series(&series, n)? == want));
    }
    Ok(CaseOutcome {
        case: case.to_string(),
        function: function.to_string(),
        observed: DepthRow::new(
            report.contact_order,
            report.bound,
            report.effective_index,
            function.mechanism(m),
        ),
        expected,
        checks,
    })
}

fn ep_case(case: &str, function: &FunctionSpec, expected: DepthRow, checks: Vec<Check>) -> Result<CaseOutcome> {
    let ep = ep_decompose(&Matrix::jordan_block(3, g("2")))?;
    let series = function.series_at(&ep.lambda, ep.m())?;
    let report = apply_function_at_ep(&ep, &series)?;
    Ok(CaseOutcome {
        case: case.to_string(),
        function: function.to_string(),
        observed: DepthRow::new(
            report.contact_order,
            report.depth_bound_after,
            report.depth_effective_after,
            function.mechanism(ep.m()),
        ),
        expected,
        checks,
    })
}

/// The five rows for `H = 2I + J_3(0)`, in table order.
pub fn exceptional_point_cases() -> Result<Vec<CaseOutcome>> {
    use Mechanism::{Mixed, Nilpotent};
    let ep = ep_decompose(&Matrix::jordan_block(3, g("2")))?;
    let n = ep.nilpotent.clone();
    let id = Matrix::<G>::identity(3);

    let exp = spec(r#"{"kind":"exp","t":1,"center":2}"#);
    let kummer = spec(r#"{"kind":"hypergeom","upper":[3],"lower":[5],"center":2}"#);
    let quadratic = spec(r#"{"kind":"poly","coeffs":[5,-4,1],"center":2}"#);
    let cubic = spec(r#"{"kind":"poly","coeffs":[-8,12,-6,1],"center":2}"#);
    let gauss = spec(r#"{"kind":"hypergeom","upper":[-1,4],"lower":[3],"center":2}"#);

    let value = |f: &FunctionSpec| -> Result<Matrix<G>> { evaluate_at_ep(&ep, &f.series_at(&ep.lambda, ep.m())?) };

    let kummer_q = value(&kummer)?.add_scalar(&g("-1"));
    let cases = vec![
        ep_case(
            "ep3-1 evolution",
            &exp,
            DepthRow::new(FIN(1), 3, 3, Nilpotent),
            vec![check(
                "e^{tN} at t=1 is [[1,1,1/2],[0,1,1],[0,0,1]]",
                evolution_at(&ep, &g("1")).polynomial_part
                    == mat(&[&["1", "1", "1/2"], &["0", "1", "1"], &["0", "0", "1"]]),
            )],
        )?,
        ep_case(
            "ep3-2 kummer",
            &kummer,
            DepthRow::new(FIN(1), 3, 3, Nilpotent),
            vec![
                check(
                    "F(H) = I + (3/5)N + (1/5)N^2",
                    value(&kummer)? == mat(&[&["1", "3/5", "1/5"], &["0", "1", "3/5"], &["0", "0", "1"]]),
                ),
                check(
                    "Q^2 has single entry 9/25",
                    kummer_q.pow(2) == mat(&[&["0", "0", "9/25"], &["0", "0", "0"], &["0", "0", "0"]]),
                ),
                check("Q^3 = 0", kummer_q.pow(3).is_zero()),
            ],
        )?,
        ep_case(
            "ep3-3 quadratic",
            &quadratic,
            DepthRow::new(FIN(2), 2, 2, Nilpotent),
            vec![check("F(H) = I + N^2", value(&quadratic)? == &id + &n.pow(2))],
        )?,
        ep_case(
            "ep3-4 cubic",
            &cubic,
            DepthRow::new(FIN(3), 1, 0, Nilpotent),
            vec![check("F(H) = 0", value(&cubic)?.is_zero())],
        )?,
        ep_case(
            "ep3-5 gauss mixed",
            &gauss,
            DepthRow::new(FIN(1), 3, 3, Mixed),
            vec![check(
                "F(H) = I - (4/3)N",
                value(&gauss)? == &id + &n.scale(&g("-4/3")),
            )],
        )?,
    ];
    Ok(cases)
}

/// Worked examples with a plain nilpotent argument.
pub fn nilpotent_cases() -> Result<Vec<CaseOutcome>> {
    use Mechanism::{Mixed, Nilpotent};
    let j3 = Matrix::<G>::jordan_block(3, G::default());
    let j4 = Matrix::<G>::jordan_block(4, G::default());
    let mut out = Vec::new();

    out.push(nilpotent_case(
        "kummer N^3=0",
        &spec(r#"{"kind":"hypergeom","upper":[1],"lower":[2]}"#),
        &j3,
        DepthRow::new(FIN(1), 3, 3, Nilpotent),
        Some(("F(N) = I + N/2 + N^2/6", mat(&[&["1", "1/2", "1/6"], &["0", "1", "1/2"], &["0", "0", "1"]]))),
    )?);

    // 0F1(-; 1; z^2) as a series in z: compose the 0F1 series with z^2
    {
        let cap = 3;
        let outer = TruncSeries::hypergeom(&[], &[g("1")], cap)?;
        let series = outer.compose(&TruncSeries::monomial(g("1"), 2, cap))?;
        let report = analyze_depth(&series, &j4)?;
        let value = evaluate_series(&series, &j4)?;
        out.push(CaseOutcome {
            case: "0F1 in z^2, N^4=0".into(),
            function: "0F1(; 1; z^2)".into(),
            observed: DepthRow::new(report.contact_order, report.bound, report.effective_index, Nilpotent),
            expected: DepthRow::new(FIN(2), 2, 2, Nilpotent),
            checks: vec![
                check("F(N) = I + N^2", value == &Matrix::identity(4) + &j4.pow(2)),
                check("N^2 has index 2", crate::depth::effective_index(&j4.pow(2))? == 2),
            ],
        });
    }

    out.push(nilpotent_case(
        "gauss a=0",
        &spec(r#"{"kind":"hypergeom","upper":[0,2],"lower":[3]}"#),
        &j3,
        DepthRow::new(Order::Infinite, 0, 0, Mixed),
        Some(("F(N) = I", Matrix::identity(3))),
    )?);
    out.push(nilpotent_case(
        "gauss generic a",
        &spec(r#"{"kind":"hypergeom","upper":[2,3],"lower":[4]}"#),
        &j3,
        DepthRow::new(FIN(1), 3, 3, Nilpotent),
        None,
    )?);
    out.push(nilpotent_case(
        "gauss a=-1",
        &spec(r#"{"kind":"hypergeom","upper":[-1,2],"lower":[3]}"#),
        &j3,
        DepthRow::new(FIN(1), 3, 3, Mixed),
        Some(("F(N) = I - (2/3)N", &Matrix::identity(3) + &j3.scale(&g("-2/3")))),
    )?);
    out.push(nilpotent_case(
        "1F1(0;b) annihilation",
        &spec(r#"{"kind":"hypergeom","upper":[0],"lower":["7/2"]}"#),
        &j4,
        DepthRow::new(Order::Infinite, 0, 0, Mixed),
        Some(("F(N) = I", Matrix::identity(4))),
    )?);
    Ok(out)
}

/// Every built-in case, nilpotent examples first.
pub fn run_suite() -> Result<Vec<CaseOutcome>> {
    let mut all = nilpotent_cases()?;
    all.extend(exceptional_point_cases()?);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for case in run_suite().unwrap() {
            assert!(case.passed(), "{case:?}");
        }
    }
}
