use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::{json, Value};

use congrlab::anatomy::{
    dickman_rho, dk_lower_bound, dknew_lower_bound, evertse_bound_check, psi_density_second_order, psi_friable,
    shifted_prime_stats, solve_u1, special_smooth_primes, RhoTable,
};
use congrlab::asymptotics::{
    approx_compare, count_nondiv, ek_delta_report, euler_factor, fit_constant, fit_log_exponent,
    fit_ramanujan_exponent, gamma_from_table, prime_density_check, winner, NonDivParams,
};
use congrlab::congruence::{
    check_hypotheses_equivalence, check_hypotheses_relaxed, check_hypotheses_sufficient, construct_case_b,
    construct_case_c, moduli, sturm_bound, up_eigen_congruence, verify_congruence, verify_congruence_numberfield,
};
use congrlab::fixtures::NewformFixture;
use congrlab::qseries::{eisenstein_label, eisenstein_level, AnySeries};
use congrlab::{Error, Result};

use crate::cli::{CaseArg, Command, NonDivArgs, TheoremArg};
use crate::series_spec::{resolve, Resolved};

/// A computed JSON document and whether it records a failed congruence.
pub struct Outcome {
    pub value: Value,
    pub congruence_failed: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, congruence_failed: false }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Keeps eight decimals, truncating the rest.
fn trunc8(v: f64) -> f64 {
    (v * 1e8).trunc() / 1e8
}

fn nondiv_params(a: &NonDivArgs) -> Result<NonDivParams> {
    match (a.m, a.k) {
        (Some(m), _) => NonDivParams::new(a.ell, m, a.level),
        (None, Some(k)) => NonDivParams::for_weight(k, a.ell, a.level),
        (None, None) => Err(Error::BadParameters("give -m or -k".into())),
    }
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Moduli(l) => Ok(Outcome::ok(to_value(&moduli(l.k, l.p, l.eps)?))),
        Command::Hypotheses { level: l, ell, theorem } => {
            let one = |t: TheoremArg| match t {
                TheoremArg::Relaxed => check_hypotheses_relaxed(l.k, l.p, l.eps, *ell),
                TheoremArg::Sufficient => check_hypotheses_sufficient(l.k, l.p, l.eps, *ell),
                _ => check_hypotheses_equivalence(l.k, l.p, l.eps, *ell),
            };
            let value = if *theorem == TheoremArg::All {
                let reports = [TheoremArg::Equivalence, TheoremArg::Relaxed, TheoremArg::Sufficient]
                    .into_iter()
                    .map(|t| one(t).map(|r| to_value(&r)))
                    .collect::<Result<Vec<_>>>()?;
                Value::Array(reports)
            } else {
                to_value(&one(*theorem)?)
            };
            Ok(Outcome::ok(value))
        }
        Command::Construct { case, level: l, prec, series } => {
            let prec = prec.unwrap_or(2 * sturm_bound(l.k, l.p) as usize + 11);
            let c = match case {
                CaseArg::B => construct_case_b(l.k, l.p, l.eps, prec)?,
                CaseArg::C => construct_case_c(l.k, l.p, l.eps, prec)?,
            };
            let mut value = c.to_json();
            if *series {
                value["series"] = to_value(&AnySeries::Rational(c.f.clone()).to_json());
            }
            Ok(Outcome { value, congruence_failed: !c.certificate.holds() })
        }
        Command::Verify { fixture, lhs, rhs, modulus, bound, prec, sturm } => {
            let modulus = BigUint::from_str(modulus.trim())
                .map_err(|_| Error::BadParameters(format!("modulus {modulus:?} is not a positive integer")))?;
            let gen_prec = prec.unwrap_or(bound.map_or(100, |b| b + 1));
            let (left, right) = match (fixture, lhs) {
                (Some(name), _) => {
                    let left = resolve(&format!("fixture:{name}"), gen_prec)?;
                    let right = match rhs {
                        Some(r) => resolve(r, left.series.prec())?,
                        None => {
                            let fx = NewformFixture::load(Path::new(name))?;
                            Resolved {
                                label: eisenstein_label(fx.k, fx.p, fx.al_sign),
                                series: eisenstein_level(fx.k, fx.p, fx.al_sign, left.series.prec())?,
                                level: Some((fx.k, fx.p)),
                            }
                        }
                    };
                    (left, right)
                }
                (None, Some(l)) => {
                    let r = rhs.as_deref().ok_or_else(|| Error::BadParameters("--rhs is required".into()))?;
                    (resolve(l, gen_prec)?, resolve(r, gen_prec)?)
                }
                (None, None) => return Err(Error::BadParameters("give --fixture or --lhs/--rhs".into())),
            };
            let have = left.series.prec().min(right.series.prec());
            let bound = bound.unwrap_or(have.saturating_sub(1));
            let mut cert =
                verify_congruence(&left.series, &right.series, &modulus, bound)?.with_labels(left.label, right.label);
            let level = sturm
                .map(|(k, p)| (k as i64, p))
                .or(left.level.filter(|l| l.1 > 1))
                .or(right.level.filter(|l| l.1 > 1));
            if let Some((k, p)) = level {
                cert = cert.with_sturm(k, p);
            }
            Ok(Outcome { congruence_failed: !cert.holds(), value: to_value(&cert) })
        }
        Command::VerifyNf { fixture, ell, bound } => {
            let fx = NewformFixture::load(Path::new(fixture))?;
            let AnySeries::Field(f) = fx.series()? else {
                return Err(Error::BadParameters(format!("fixture {} is rational; use verify --modulus", fx.label)));
            };
            let e = fx.eisenstein(f.prec())?;
            let bound = bound.unwrap_or(f.prec() - 1);
            let results = verify_congruence_numberfield(&f, &e, *ell, bound)?;
            let any = results.iter().any(|(_, c)| c.holds());
            let factors: Vec<Value> = results
                .into_iter()
                .map(|(ideal, cert)| {
                    let cert = cert
                        .with_sturm(fx.k, fx.p)
                        .with_labels(fx.label.clone(), eisenstein_label(fx.k, fx.p, fx.al_sign));
                    json!({"ideal": ideal.describe(), "residue_degree": ideal.residue_degree, "certificate": cert})
                })
                .collect();
            Ok(Outcome {
                value: json!({"fixture": fx.label, "ell": ell, "factors": factors, "any_holds": any}),
                congruence_failed: !any,
            })
        }
        Command::UpEigen { level: l, ell, prec } => {
            let r = up_eigen_congruence(l.k, l.p, l.eps, *ell, *prec)?;
            let failed = !r.certificate.holds() || !r.closed_form_matches;
            Ok(Outcome { value: to_value(&r), congruence_failed: failed })
        }
        Command::Sieve { params, xs, constant, gamma, density } => {
            let p = nondiv_params(params)?;
            let mut xs = xs.clone();
            xs.sort_unstable();
            xs.dedup();
            if xs.iter().any(|&x| x < 3) {
                return Err(Error::BadParameters("every x must exceed 2".into()));
            }
            let counts: Vec<(f64, u64)> = xs.iter().map(|&x| (x as f64, count_nondiv(x, &p).count)).collect();
            let fitted = fit_constant(&counts, p.h1);
            let c = constant.unwrap_or(fitted);
            let mut rows = Vec::new();
            for &(x, count) in &counts {
                let a = approx_compare(x, c, p.h1, gamma.unwrap_or(1.0))?;
                rows.push(json!({
                    "x": x as u64,
                    "count": count,
                    "landau": a.landau,
                    "ramanujan": a.ramanujan,
                    "second_order": gamma.map(|_| a.second_order),
                    "fitted_C": fitted,
                }));
            }
            let fit = if counts.len() >= 2 && counts.iter().all(|c| c.1 > 0) {
                let (theta_l, _) = fit_log_exponent(&counts)?;
                let (theta_r, c_r) = fit_ramanujan_exponent(&counts)?;
                json!({"theta_landau": theta_l, "theta_ramanujan": theta_r, "C_ramanujan": c_r, "target": 1.0 / p.h1 as f64})
            } else {
                Value::Null
            };
            let mut value = json!({"params": p, "rows": rows, "exponent_fit": fit});
            if *density {
                value["density"] = to_value(&prime_density_check(*xs.last().expect("nonempty"), &p)?);
            }
            Ok(Outcome::ok(value))
        }
        Command::EulerFactor { params, p1, max_exp } => {
            let p = nondiv_params(params)?;
            let f = euler_factor(*p1, &p, *max_exp)?;
            let direct: Vec<bool> = (0..=*max_exp as u32).map(|a| p.local_value(*p1, a) != 0).collect();
            let matches = direct == f.indicator;
            Ok(Outcome::ok(json!({"factor": f, "zeros": f.zeros(), "direct": direct, "matches_direct": matches})))
        }
        Command::GammaDelta { p, r, ell, gamma_base, table_ell } => {
            let mut value = to_value(&ek_delta_report(*p, *r, *ell, *gamma_base)?);
            if let Some(t) = table_ell {
                let g = gamma_from_table(*t)?;
                value["table"] = json!({"ell": t, "gamma": g, "winner": winner(g)});
            }
            Ok(Outcome::ok(value))
        }
        Command::Rho { u, u1, dump, u_max } => {
            let mut value = json!({});
            if let Some(u) = u {
                value["rho"] = json!(trunc8(dickman_rho(*u)?));
            }
            if *u1 {
                let root = solve_u1();
                value["u1"] = json!(root);
                value["residual"] = json!(4.0 * root * dickman_rho(root)? - 1.0);
            }
            if let Some(path) = dump {
                let file = std::fs::File::create(path)
                    .map_err(|e| Error::BadParameters(format!("{}: {e}", path.display())))?;
                let table = RhoTable::new(*u_max);
                table.write_csv(std::io::BufWriter::new(file))?;
                value["dump"] = json!({"path": path.display().to_string(), "rows": table.values.len()});
            }
            Ok(Outcome::ok(value))
        }
        Command::Psi { x, y } => {
            let psi = psi_friable(*x, *y)?;
            let mut value = json!({"x": x, "y": y, "psi": psi, "ratio": psi as f64 / *x as f64});
            if *x > 1 && *y > 1 && *y < *x {
                let u = (*x as f64).ln() / (*y as f64).ln();
                value["u"] = json!(u);
                value["rho"] = json!(dickman_rho(u)?);
                value["second_order"] = json!(psi_density_second_order(*x as f64, *y as f64)?);
            }
            Ok(Outcome::ok(value))
        }
        Command::Shifted { x, s, u } => {
            let st = shifted_prime_stats(*x, *s, *u)?;
            let dev = (st.density - st.conjectural).abs();
            let mut value = to_value(&st);
            value["deviation"] = json!(dev);
            value["warning"] =
                if dev > 0.05 { json!(format!("density deviates from 1 - rho(u) by {dev:.4}")) } else { Value::Null };
            Ok(Outcome::ok(value))
        }
        Command::DegreeBound { k, p } => Ok(Outcome::ok(json!({
            "k": k,
            "p": p,
            "dk_lower_bound": dk_lower_bound(*k, *p)?,
            "dknew_lower_bound": dknew_lower_bound(*k, *p)?,
        }))),
        Command::SpecialPrimes { bound } => {
            Ok(Outcome::ok(json!({"bound": bound, "primes": special_smooth_primes(*bound)})))
        }
        Command::Evertse { big_x, x } => Ok(Outcome::ok(to_value(&evertse_bound_check(*big_x, *x)?))),
    }
}
