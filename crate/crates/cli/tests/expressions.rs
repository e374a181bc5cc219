use nckit::expr::{eval, parse, reduce, render, Expr, ExprError};
use nckit_core::sample::{self, PolyShape};
use nckit_core::{DifferentialForm, Poly, StarContext, ThetaProfile, Wedge};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx() -> StarContext {
    StarContext::new(ThetaProfile::new(Poly::t(), Poly::zero(), Poly::zero()).unwrap())
}

#[test]
fn documented_reductions() {
    let c = ctx();
    assert_eq!(reduce("x1*x2 - x2*x1", &c).unwrap(), "i*t");
    assert_eq!(reduce("~ (x1*x2)", &c).unwrap(), "x1.x2 - 1/2*i*t");
    assert_eq!(reduce("d(x1)", &c).unwrap(), "dx1");
    assert_eq!(reduce("x1 *  x2\n - x2*x1", &c).unwrap(), "i*t");
}

#[test]
fn documented_parses() {
    match parse("x1*x2 - x2*x1").unwrap() {
        Expr::Sub(a, b) => {
            assert!(matches!(*a, Expr::Star(..)));
            assert!(matches!(*b, Expr::Star(..)));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse("D0(x1*x2)").unwrap(), Expr::Partial(0, _)));
    match parse("x1*").unwrap_err() {
        ExprError::Syntax { line, col, .. } => assert_eq!((line, col), (1, 4)),
        e => panic!("{e:?}"),
    }
}

#[test]
fn canonical_examples_round_trip() {
    let c = ctx();
    for s in ["x1.x2 - 1/2*i*t", "(1/3 - 2*i)*x1", "x1.x2*dx1*dx2", "1/2*i*dt + x2*dx1", "-x3^4 + eps", "0"] {
        assert_eq!(reduce(s, &c).unwrap(), s);
    }
}

#[test]
fn precedence() {
    let c = ctx();
    assert_eq!(reduce("~x1*x2", &c).unwrap(), reduce("(~x1)*x2", &c).unwrap());
    assert_eq!(reduce("-x1^2", &c).unwrap(), "-x1^2");
    assert_eq!(reduce("2 - 3 - 4", &c).unwrap(), "-5");
    assert_eq!(reduce("x1 + x2*x1", &c).unwrap(), reduce("x1 + (x2*x1)", &c).unwrap());
}

#[test]
fn eps_cutoff() {
    let c = ctx().with_cutoff(1);
    assert_eq!(reduce("(1 + eps)^3", &c).unwrap(), "3*eps + 1");
    assert_eq!(reduce("eps*eps*x1", &c).unwrap(), "0");
}

fn random_form(rng: &mut ChaCha8Rng) -> DifferentialForm {
    let shape = PolyShape::new(3, 3, 2).total(5);
    let mut f = DifferentialForm::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let w = Wedge::from_bits(rng.gen_range(0..16));
        f.add_component(w, sample::poly(rng, &shape));
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_form(&mut rng);
        let text = render(&v);
        let back = eval(&parse(&text).unwrap(), &ctx()).unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(render(&back), text);
    }

    #[test]
    fn ast_display_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = render(&random_form(&mut rng));
        let g = sample::poly(&mut rng, &PolyShape::new(2, 2, 1));
        let src = format!("~({a})*({g}) + d({g}) - D1({g}).x2");
        let e = parse(&src).unwrap();
        let again = parse(&e.to_string()).unwrap();
        prop_assert_eq!(eval(&e, &ctx()).unwrap(), eval(&again, &ctx()).unwrap());
    }

    #[test]
    fn reduce_is_deterministic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample::poly(&mut rng, &PolyShape::new(3, 3, 1));
        let g = sample::poly(&mut rng, &PolyShape::new(3, 3, 1));
        let src = format!("({f})*({g}) - ({g})*({f})");
        prop_assert_eq!(reduce(&src, &ctx()).unwrap(), reduce(&src, &ctx()).unwrap());
    }
}
