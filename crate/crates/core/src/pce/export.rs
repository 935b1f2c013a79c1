use std::io::Write;

use super::{ErrorPoint, PCExpansion};
use crate::error::Result;
use crate::indices::{beta_weight, AdmissibleWeights};
use crate::report::fmt_f64;

/// Coefficient table: `nu,c_weight,beta_weight,norm_X`.
pub fn write_coefficients_csv<W: Write>(exp: &PCExpansion, m: u32, rho: &AdmissibleWeights, mut w: W) -> Result<()> {
    writeln!(w, "nu,c_weight,beta_weight,norm_X")?;
    let set = exp.ref_set();
    for ((nu, c), norm) in set.members().iter().zip(set.weights()).zip(exp.norms()) {
        let beta = beta_weight(nu, m, rho)?;
        writeln!(
            w,
            "{},{},{},{}",
            nu.to_key(),
            fmt_f64(*c),
            fmt_f64(beta),
            fmt_f64(*norm)
        )?;
    }
    Ok(())
}

/// Error curve: `N,error,m_lambda,d_lambda`.
pub fn write_error_curve_csv<W: Write>(points: &[ErrorPoint], mut w: W) -> Result<()> {
    writeln!(w, "N,error,m_lambda,d_lambda")?;
    for p in points {
        writeln!(w, "{},{},{},{}", p.n, fmt_f64(p.error), p.m_lambda, p.d_lambda)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::{build_index_set, SurrogateWeights};
    use crate::pce::{compute_expansion, error_curve, Estimator, VectorMap};

    #[test]
    fn csv_schemas() {
        let rho = AdmissibleWeights::explicit(vec![2.0, 3.0]).unwrap();
        let sw = SurrogateWeights::from_parts(1.0, 2, rho.clone(), 2).unwrap();
        let set = build_index_set(4, &sw, 2).unwrap();
        let map = VectorMap::new(2, 1, |y: &[f64]| vec![y[0] + y[1] * y[1]]);
        let exp = compute_expansion(&map, &set, Estimator::tensor(2)).unwrap();

        let mut buf = Vec::new();
        write_coefficients_csv(&exp, 2, &rho, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "nu,c_weight,beta_weight,norm_X");
        assert!(lines[1].starts_with(",1.0000000000000000e0,1.0000000000000000e0,"));
        assert!(lines[2].starts_with("1:1,4.0000000000000000e0,"));
        assert_eq!(lines.len(), 5);

        let mut buf = Vec::new();
        write_error_curve_csv(&error_curve(&exp, &[1, 4]).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("N,error,m_lambda,d_lambda\n1,"));
        assert!(text.ends_with("4,0.0000000000000000e0,2,1\n"));
    }
}
