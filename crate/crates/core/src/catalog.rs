//! Machine-readable catalog of real bounded symmetric domains with
//! consistency validation of the genus and dimension formulas.
//!
//! Rows with free parameters store small integer expressions evaluated over
//! the instantiation grids r in 1..=4, b in 0..=2, eps in {0,1},
//! (p,q) in {(2,3),(3,5)}, n = r+2; every identity is polynomial of degree
//! at most two, so grid validation is exhaustive in the relevant range.

use serde::Serialize;

/// Integer expression in the row parameters (r, b, eps, p, q, n).
pub type PFn = fn(&Assign) -> i64;

/// One instantiation of the free parameters.
#[derive(Clone, Copy, Debug, Default)]
pub struct Assign {
    pub r: i64,
    pub b: i64,
    pub eps: i64,
    pub p: i64,
    pub q: i64,
    pub n: i64,
}

/// Characteristic multiplicity entry: a value or an explicit
/// not-applicable marker (the D_2 family carries two multiplicities and
/// the rank-one rows none).
#[derive(Clone, Copy)]
pub enum Mult {
    Val(PFn),
    NotApplicable,
}

/// Which free parameters a row ranges over.
#[derive(Clone, Copy, Debug)]
pub enum Grid {
    Fixed,
    R,
    RB,
    REps,
    N,
    PQ,
}

/// One row of the parameter table.
#[derive(Clone, Copy)]
pub struct DomainParams {
    pub label: &'static str,
    pub quotient: &'static str,
    pub root_type: Option<&'static str>,
    pub grid: Grid,
    pub product_case: bool,
    /// type-A root system: dimension formula r(r-1)/2 a + r
    pub type_a: bool,
    pub r_r: PFn,
    pub a_r: Mult,
    pub b_r: Option<PFn>,
    pub c_r: Option<PFn>,
    pub dim: PFn,
    pub r_c: Option<PFn>,
    pub a_c: Option<PFn>,
    pub b_c: Option<PFn>,
    pub complexification: &'static str,
}

/// Status of one row's dimension check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    Pass,
    Skip(String),
    Fail(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub label: String,
    pub quotient: String,
    pub root_type: Option<String>,
    pub product_case: bool,
    pub dim_status: RowStatus,
    /// genus values over the instantiation grid (non-product rows)
    pub genus_samples: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub rows: Vec<RowReport>,
    pub passes: usize,
    pub skips: usize,
    pub fails: usize,
}

const fn v(f: PFn) -> Mult {
    Mult::Val(f)
}

/// The parameter table.
pub static TABLE: &[DomainParams] = &[
    DomainParams {
        label: "I^R_{r,r+b}",
        quotient: "U_{r,r+b}(R)/U_r(R)xU_{r+b}(R)",
        root_type: Some("D_r/B_r"),
        grid: Grid::RB,
        product_case: false,
        type_a: false,
        r_r: |a| a.r,
        a_r: v(|_| 1),
        b_r: Some(|a| a.b),
        c_r: Some(|_| 0),
        dim: |a| a.r * (a.r + a.b),
        r_c: Some(|a| a.r),
        a_c: Some(|_| 2),
        b_c: Some(|a| a.b),
        complexification: "I_{r,r+b}",
    },
    DomainParams {
        label: "I_{r,r+b}",
        quotient: "U_{r,r+b}(C)/U_r(C)xU_{r+b}(C)",
        root_type: None,
        grid: Grid::RB,
        product_case: true,
        type_a: false,
        r_r: |a| a.r,
        a_r: v(|_| 2),
        b_r: Some(|a| 2 * a.b),
        c_r: Some(|_| 1),
        dim: |a| 2 * a.r * (a.r + a.b),
        r_c: None,
        a_c: None,
        b_c: None,
        complexification: "(product case)",
    },
    DomainParams {
        label: "I^H_{2r,2r+2b}",
        quotient: "U_{r,r+b}(H)/U_r(H)xU_{r+b}(H)",
        root_type: Some("C_r/BC_r"),
        grid: Grid::RB,
        product_case: false,
        type_a: false,
        r_r: |a| a.r,
        a_r: v(|_| 4),
        b_r: Some(|a| 4 * a.b),
        c_r: Some(|_| 3),
        dim: |a| 4 * a.r * (a.r + a.b),
        r_c: Some(|a| 2 * a.r),
        a_c: Some(|_| 2),
        b_c: Some(|a| 2 * a.b),
        complexification: "I_{2r,2r+2b}",
    },
    DomainParams {
        label: "V^{O_0}",
        quotient: "U_{2,2}(H)/U_2(H)xU_2(H)",
        root_type: Some("B_2"),
        grid: Grid::Fixed,
        product_case: false,
        type_a: false,
        r_r: |_| 2,
        a_r: v(|_| 3),
        b_r: Some(|_| 4),
        c_r: Some(|_| 0),
        dim: |_| 16,
        r_c: Some(|_| 2),
        a_c: Some(|_| 6),
        b_c: Some(|_| 4),
        complexification: "V",
    },
    DomainParams {
        label: "III^R_r",
        quotient: "G_r(R)/U_r(R)",
        root_type: Some("A_r"),
        grid: Grid::R,
        product_case: false,
        type_a: true,
        r_r: |a| a.r,
        a_r: v(|_| 1),
        b_r: None,
        c_r: None,
        dim: |a| a.r * (a.r + 1) / 2,
        r_c: Some(|a| a.r),
        a_c: Some(|_| 1),
        b_c: Some(|_| 0),
        complexification: "III_r",
    },
    DomainParams {
        label: "I^C_{r,r}",
        quotient: "G_r(C)/U_r(C)",
        root_type: Some("A_r"),
        grid: Grid::R,
        product_case: false,
        type_a: true,
        r_r: |a| a.r,
        a_r: v(|_| 2),
        b_r: None,
        c_r: None,
        dim: |a| a.r * a.r,
        r_c: Some(|a| a.r),
        a_c: Some(|_| 2),
        b_c: Some(|_| 0),
        complexification: "I_{r,r}",
    },
    DomainParams {
        label: "II^H_{2r}",
        quotient: "G_r(H)/U_r(H)",
        root_type: Some("A_r"),
        grid: Grid::R,
        product_case: false,
        type_a: true,
        r_r: |a| a.r,
        a_r: v(|_| 4),
        b_r: None,
        c_r: None,
        dim: |a| a.r * (2 * a.r - 1),
        r_c: Some(|a| a.r),
        a_c: Some(|_| 4),
        b_c: Some(|_| 0),
        complexification: "II_{2r}",
    },
    DomainParams {
        label: "VI^{O_0}",
        quotient: "G_4(H)/U_4(H)",
        root_type: Some("D_3"),
        grid: Grid::Fixed,
        product_case: false,
        type_a: false,
        r_r: |_| 3,
        a_r: v(|_| 4),
        b_r: Some(|_| 0),
        c_r: Some(|_| 0),
        dim: |_| 27,
        r_c: Some(|_| 3),
        a_c: Some(|_| 8),
        b_c: Some(|_| 0),
        complexification: "VI",
    },
    DomainParams {
        label: "III_r",
        quotient: "Sp_{2r}(R)/U_r(C)",
        root_type: None,
        grid: Grid::R,
        product_case: true,
        type_a: false,
        r_r: |a| a.r,
        a_r: v(|_| 1),
        b_r: Some(|_| 0),
        c_r: Some(|_| 1),
        dim: |a| a.r * (a.r + 1),
        r_c: None,
        a_c: None,
        b_c: None,
        complexification: "(product case)",
    },
    DomainParams {
        label: "III^H_{2r}",
        quotient: "Sp_{2r}(C)/U_r(H)",
        root_type: Some("C_r"),
        grid: Grid::R,
        product_case: false,
        type_a: false,
        r_r: |a| a.r,
        a_r: v(|_| 2),
        b_r: Some(|_| 0),
        c_r: Some(|_| 2),
        dim: |a| a.r * (2 * a.r + 1),
        r_c: Some(|a| 2 * a.r),
        a_c: Some(|_| 1),
        b_c: Some(|_| 0),
        complexification: "III_{2r}",
    },
    DomainParams {
        label: "II^R_{2r+eps}",
        quotient: "O_{2r+eps}(C)/U_{2r+eps}(R)",
        root_type: Some("D_r/B_r"),
        grid: Grid::REps,
        product_case: false,
        type_a: false,
        r_r: |a| a.r,
        a_r: v(|_| 2),
        b_r: Some(|a| 2 * a.eps),
        c_r: Some(|_| 0),
        dim: |a| a.r * (2 * (a.r + a.eps) - 1),
        r_c: Some(|a| a.r),
        a_c: Some(|_| 4),
        // the parity multiplicity: 2 eps (the printed table shows its
        // eps = 1 value)
        b_c: Some(|a| 2 * a.eps),
        complexification: "II_{2r+eps}",
    },
    DomainParams {
        label: "II_{2r+eps}",
        quotient: "O_{2r+eps}(H)/U_{2r+eps}(C)",
        root_type: None,
        grid: Grid::REps,
        product_case: true,
        type_a: false,
        r_r: |a| a.r,
        a_r: v(|_| 4),
        b_r: Some(|a| 4 * a.eps),
        c_r: Some(|_| 1),
        dim: |a| 2 * a.r * (2 * (a.r + a.eps) - 1),
        r_c: None,
        a_c: None,
        b_c: None,
        complexification: "(product case)",
    },
    DomainParams {
        label: "IV^{R,q}_{p+q}",
        quotient: "SO_{p,1}xSO_{1,q}/SO_{p,0}xSO_{0,q}",
        root_type: Some("D_2/A_2"),
        grid: Grid::PQ,
        product_case: false,
        type_a: false,
        r_r: |_| 2,
        a_r: Mult::NotApplicable,
        b_r: Some(|_| 0),
        c_r: Some(|_| 0),
        dim: |a| a.p + a.q,
        r_c: Some(|_| 2),
        a_c: Some(|a| a.p + a.q - 2),
        b_c: Some(|_| 0),
        complexification: "IV_{p+q}",
    },
    DomainParams {
        label: "IV_n",
        quotient: "SO_{n,2}/SO_{n,0}xSO_{0,2}",
        root_type: None,
        grid: Grid::N,
        product_case: true,
        type_a: false,
        r_r: |_| 2,
        a_r: v(|a| a.n - 2),
        b_r: Some(|_| 0),
        c_r: Some(|_| 1),
        dim: |a| 2 * a.n,
        r_c: None,
        a_c: None,
        b_c: None,
        complexification: "(product case)",
    },
    DomainParams {
        label: "V",
        quotient: "E_{6(-14)}/Spin(10)xSO(2)",
        root_type: None,
        grid: Grid::Fixed,
        product_case: true,
        type_a: false,
        r_r: |_| 2,
        a_r: v(|_| 6),
        b_r: Some(|_| 8),
        c_r: Some(|_| 1),
        dim: |_| 32,
        r_c: None,
        a_c: None,
        b_c: None,
        complexification: "(product case)",
    },
    DomainParams {
        label: "IV^{R,0}_n",
        quotient: "SO_{n,1}/SO_{n,0}",
        root_type: Some("C_1"),
        grid: Grid::N,
        product_case: false,
        type_a: false,
        r_r: |_| 1,
        a_r: Mult::NotApplicable,
        b_r: Some(|_| 0),
        c_r: Some(|a| a.n - 1),
        dim: |a| a.n,
        r_c: Some(|_| 2),
        a_c: Some(|a| a.n - 2),
        b_c: Some(|_| 0),
        complexification: "IV_n",
    },
    DomainParams {
        label: "V^O",
        quotient: "F_{4(-20)}/SO(9)",
        root_type: Some("BC_1"),
        grid: Grid::Fixed,
        product_case: false,
        type_a: false,
        r_r: |_| 1,
        a_r: Mult::NotApplicable,
        b_r: Some(|_| 8),
        c_r: Some(|_| 7),
        dim: |_| 16,
        r_c: Some(|_| 2),
        a_c: Some(|_| 6),
        b_c: Some(|_| 4),
        complexification: "V",
    },
    DomainParams {
        label: "VI",
        quotient: "E_{7(-25)}/E_6xSO(2)",
        root_type: None,
        grid: Grid::Fixed,
        product_case: true,
        type_a: false,
        r_r: |_| 3,
        a_r: v(|_| 8),
        b_r: Some(|_| 0),
        c_r: Some(|_| 1),
        dim: |_| 54,
        r_c: None,
        a_c: None,
        b_c: None,
        complexification: "(product case)",
    },
    DomainParams {
        label: "VI^O",
        quotient: "E_{6(-26)}xO(2)/F_4xO(1)",
        root_type: Some("A_3"),
        grid: Grid::Fixed,
        product_case: false,
        type_a: true,
        r_r: |_| 3,
        a_r: v(|_| 8),
        b_r: None,
        c_r: None,
        dim: |_| 27,
        r_c: Some(|_| 3),
        a_c: Some(|_| 8),
        b_c: Some(|_| 0),
        complexification: "VI",
    },
];

/// Instantiation grid for each parameter family.
pub fn assignments(grid: Grid) -> Vec<Assign> {
    let mut out = Vec::new();
    match grid {
        Grid::Fixed => out.push(Assign::default()),
        Grid::R => {
            for r in 1..=4 {
                out.push(Assign {
                    r,
                    ..Default::default()
                });
            }
        }
        Grid::RB => {
            for r in 1..=4 {
                for b in 0..=2 {
                    out.push(Assign {
                        r,
                        b,
                        ..Default::default()
                    });
                }
            }
        }
        Grid::REps => {
            for r in 1..=4 {
                for eps in 0..=1 {
                    out.push(Assign {
                        r,
                        eps,
                        ..Default::default()
                    });
                }
            }
        }
        Grid::N => {
            // n = r + 2 over the r grid keeps a_C = n - 2 positive
            for r in 1..=4 {
                out.push(Assign {
                    n: r + 2,
                    ..Default::default()
                });
            }
        }
        Grid::PQ => {
            for (p, q) in [(2, 3), (3, 5)] {
                out.push(Assign {
                    p,
                    q,
                    ..Default::default()
                });
            }
        }
    }
    out
}

/// Genus p = (r_C - 1) a_C + b_C + 2 of the complexification.
pub fn genus(row: &DomainParams, a: &Assign) -> Option<i64> {
    let (rc, ac, bc) = (row.r_c?, row.a_c?, row.b_c?);
    Some((rc(a) - 1) * ac(a) + bc(a) + 2)
}

/// Dimension consistency: the real-side formula (and the complex-side one
/// when present) must reproduce the tabulated dimension at every grid
/// point. The a_R-term carries the coefficient r(r-1), so rows without a
/// multiplicity are still checkable at rank one; the two-multiplicity
/// D_2 row is exempt by design.
pub fn dim_check(row: &DomainParams) -> RowStatus {
    for asg in assignments(row.grid) {
        let r = (row.r_r)(&asg);
        let a_term = match row.a_r {
            Mult::Val(f) => {
                if row.type_a {
                    r * (r - 1) / 2 * f(&asg)
                } else {
                    r * (r - 1) * f(&asg)
                }
            }
            Mult::NotApplicable => {
                if r >= 2 {
                    return RowStatus::Skip(
                        "two multiplicities a instead of one; exempt by design".into(),
                    );
                }
                0
            }
        };
        let d_real = if row.type_a {
            a_term + r
        } else {
            let b = row.b_r.map(|f| f(&asg)).unwrap_or(0);
            let c = row.c_r.map(|f| f(&asg)).unwrap_or(0);
            a_term + r * b + r * c + r
        };
        let d_table = (row.dim)(&asg);
        if d_real != d_table {
            return RowStatus::Fail(format!(
                "real-side dimension {d_real} != tabulated {d_table} at {asg:?}"
            ));
        }
        if let (Some(rc), Some(ac), Some(bc)) = (row.r_c, row.a_c, row.b_c) {
            let rc = rc(&asg);
            let d_cx = rc * (rc - 1) / 2 * ac(&asg) + rc * bc(&asg) + rc;
            if d_cx != d_table {
                return RowStatus::Fail(format!(
                    "complex-side dimension {d_cx} != tabulated {d_table} at {asg:?}"
                ));
            }
        }
    }
    RowStatus::Pass
}

/// Run the dimension and genus validation over the whole table.
pub fn validate_table() -> CatalogReport {
    let mut rows = Vec::new();
    let (mut passes, mut skips, mut fails) = (0, 0, 0);
    for row in TABLE {
        let status = dim_check(row);
        match status {
            RowStatus::Pass => passes += 1,
            RowStatus::Skip(_) => skips += 1,
            RowStatus::Fail(_) => fails += 1,
        }
        let genus_samples = assignments(row.grid)
            .iter()
            .filter_map(|a| genus(row, a))
            .collect();
        rows.push(RowReport {
            label: row.label.to_string(),
            quotient: row.quotient.to_string(),
            root_type: row.root_type.map(|s| s.to_string()),
            product_case: row.product_case,
            dim_status: status,
            genus_samples,
        });
    }
    CatalogReport {
        rows,
        passes,
        skips,
        fails,
    }
}

/// Genus of the complexification of the unit interval I^R_{1,1}.
pub fn genus_unit_interval_complexification() -> i64 {
    let row = &TABLE[0];
    genus(
        row,
        &Assign {
            r: 1,
            b: 0,
            ..Default::default()
        },
    )
    .unwrap()
}

/// Aligned plain-text rendering of the validation report.
pub fn render_text(report: &CatalogReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:<16} {:<40} {:<8} {:<9} {:<8} genus\n",
        "domain", "quotient", "root", "product", "dims"
    ));
    for r in &report.rows {
        let status = match &r.dim_status {
            RowStatus::Pass => "pass",
            RowStatus::Skip(_) => "skip",
            RowStatus::Fail(_) => "FAIL",
        };
        let genus = if r.genus_samples.is_empty() {
            "-".to_string()
        } else {
            r.genus_samples
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        s.push_str(&format!(
            "{:<16} {:<40} {:<8} {:<9} {:<8} {}\n",
            r.label,
            r.quotient,
            r.root_type.as_deref().unwrap_or("-"),
            if r.product_case { "yes" } else { "no" },
            status,
            genus
        ));
    }
    s.push_str(&format!(
        "{} rows: {} pass, {} skipped, {} failed\n",
        report.rows.len(),
        report.passes,
        report.skips,
        report.fails
    ));
    s
}
