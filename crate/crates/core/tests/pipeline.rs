use coherank::coherence::{coherency_test, partition_by_split};
use coherank::peeling::{peel, PeelOptions};
use coherank::rank::{encode_profile, Preference};
use coherank::report::{build_bundle, generate_synthetic, render_report, render_svg_map, MapKind, Style};
use coherank::Rational;

fn toy() -> coherank::rank::Profile {
    let (c, b, a) = (0, 1, 2);
    encode_profile(
        &[
            Preference::new(vec![a, b, c]),
            Preference::new(vec![a, c, b]),
            Preference::new(vec![b, a, c]),
            Preference::new(vec![b, c, a]),
        ],
        vec!["C".into(), "B".into(), "A".into()],
    )
    .unwrap()
}

#[test]
fn smallest_generated_cluster_is_coherent() {
    let syn = generate_synthetic(1, 2, &[(1, 2)], 0).unwrap();
    let part = partition_by_split(&syn.profile, &syn.j1).unwrap();
    let v = coherency_test(&syn.profile, &part, 1).unwrap();
    assert!(v.coherent);
    assert_eq!(v.sub_delta, Rational::new(2, 3));
}

#[test]
fn single_planted_cluster_peels_to_one_group() {
    let syn = generate_synthetic(4, 6, &[(1, 100)], 7).unwrap();
    let res = peel(&syn.profile, &PeelOptions::default()).unwrap();
    assert_eq!(res.groups.len(), 1);
    assert_eq!(res.groups[0].clusters.len(), 1);
    assert_eq!(res.groups[0].cross, Rational::from_integer(0));
    assert!(res.noisy.is_empty());
}

#[test]
fn two_equal_clusters_average_their_crossing() {
    let syn = generate_synthetic(4, 6, &[(1, 50), (3, 50)], 11).unwrap();
    let res = peel(&syn.profile, &PeelOptions::default()).unwrap();
    assert_eq!(res.groups.len(), 1);
    let g = &res.groups[0];
    let sizes: Vec<(usize, usize)> = g.clusters.iter().map(|c| (c.alpha, c.voters.len())).collect();
    assert_eq!(sizes, vec![(1, 50), (3, 50)]);
    assert_eq!(g.cross, Rational::new(1, 12));
}

#[test]
fn toy_report() {
    let b = build_bundle(&toy(), &PeelOptions::default(), true).unwrap();
    let text = render_report(&b, Style::Text);
    assert!(text.contains("2/3"), "{text}");
    assert!(text.contains("cohG(1): 2 voters (50.00%)"), "{text}");
    assert!(text.contains("noisyG: 0 voters"), "{text}");
    let md = render_report(&b, Style::Markdown);
    assert!(md.starts_with("# Coherent groups"));
    assert!(md.contains("| alpha | size |"));
}

#[test]
fn coherent_cluster_map_has_one_abscissa() {
    let syn = generate_synthetic(2, 3, &[(2, 40)], 3).unwrap();
    let b = build_bundle(&syn.profile, &PeelOptions::default(), true).unwrap();
    let map = b.map.as_ref().unwrap();
    assert!(map.f[0].windows(2).all(|w| w[0] == w[1]));
    let svg = render_svg_map(&b, MapKind::Voters).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg, render_svg_map(&b.clone(), MapKind::Voters).unwrap());
}

#[test]
fn repeated_ballots_are_labelled_with_multiplicity() {
    let (a, b, c, d, e) = (0, 1, 2, 3, 4);
    let p = encode_profile(
        &[
            Preference::repeated(vec![c, a, e, b, d], 162),
            Preference::repeated(vec![a, c, b, d, e], 40),
            Preference::repeated(vec![b, d, e, a, c], 25),
        ],
        ["A", "B", "C", "D", "E"].map(String::from).to_vec(),
    )
    .unwrap();
    let bundle = build_bundle(&p, &PeelOptions::default(), true).unwrap();
    let svg = render_svg_map(&bundle, MapKind::Voters).unwrap();
    assert!(svg.contains(">CAEBD162<"), "{svg}");
    assert_eq!(svg.matches("<circle").count(), 3);
}
