use autgrp::contraction::{nucleus_search, noncontraction_witness, self_similar_closure_size, NucleusOutcome};
use autgrp::mealy::Automaton;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    match args[1].as_str() {
        "nucleus" => {
            let n: u64 = args[2].parse().unwrap();
            let size_cap: usize = args.get(3).map(|v| v.parse().unwrap()).unwrap_or(512);
            let depth_cap: usize = args.get(4).map(|v| v.parse().unwrap()).unwrap_or(24);
            let aut = Automaton::decode_number(n).unwrap();
            let t = Instant::now();
            match nucleus_search(&aut, size_cap, depth_cap) {
                NucleusOutcome::Found(nuc) => {
                    println!("{n}: nucleus size {} depth_used {} ({:?})", nuc.size(), nuc.depth_used(), t.elapsed());
                    let t2 = Instant::now();
                    match self_similar_closure_size(&nuc) {
                        Some(c) => println!("   self-similar closure {} ({:?})", c, t2.elapsed()),
                        None => println!("   closure cap exceeded"),
                    }
                }
                NucleusOutcome::Unknown => println!("{n}: unknown ({:?})", t.elapsed()),
            }
        }
        "witness" => {
            let n: u64 = args[2].parse().unwrap();
            let aut = Automaton::decode_number(n).unwrap();
            let t = Instant::now();
            match noncontraction_witness(&aut, 6, 6) {
                Some(w) => println!("{n}: witness {} at {:?} certified={} ({:?})", w.word, w.vertex, w.certified, t.elapsed()),
                None => println!("{n}: none ({:?})", t.elapsed()),
            }
        }
        "sf" => {
            let n: u64 = args[2].parse().unwrap();
            let level: usize = args[3].parse().unwrap();
            let aut = Automaton::decode_number(n).unwrap();
            let t = Instant::now();
            let exps: Vec<u64> = (0..=level)
                .map(|k| autgrp::level_quotient_order(&aut, k).unwrap().trailing_zeros().unwrap_or(0))
                .collect();
            println!("{n}: SF {:?} ({:?})", exps, t.elapsed());
        }
        "gr" => {
            let n: u64 = args[2].parse().unwrap();
            let radius: usize = args[3].parse().unwrap();
            let aut = Automaton::decode_number(n).unwrap();
            let t = Instant::now();
            let g = autgrp::growth_sequence(&aut, radius);
            let counts: Vec<String> = g.counts.iter().map(|c| c.to_string()).collect();
            println!("{n}: Gr {} ({:?})", counts.join(","), t.elapsed());
        }
        "classify" => {
            let t = Instant::now();
            let table = autgrp::classify_all();
            println!("classes {} below3 {} ({:?})", table.class_count(), table.reduced_below_three(), t.elapsed());
        }
        "enum" => {
            let n: u64 = args[2].parse().unwrap();
            let cap: u64 = args[3].parse().unwrap();
            let aut = Automaton::decode_number(n).unwrap();
            let t = Instant::now();
            println!("{n}: {:?} ({:?})", autgrp::enumerate_if_finite(&aut, cap), t.elapsed());
        }
        "ssc" => {
            // variants of the self-similar closure count
            use autgrp::contraction::{closure_variant_sections_only, closure_variant_seeded};
            let n: u64 = args[2].parse().unwrap();
            let aut = Automaton::decode_number(n).unwrap();
            let NucleusOutcome::Found(nuc) = nucleus_search(&aut, 512, 48) else { panic!() };
            println!("nucleus {}", nuc.size());
            println!("v6 sections-of-products depth>=1: {:?}", closure_variant_sections_only(&nuc));
            println!("v9 seeded stable closure: {:?}", closure_variant_seeded(&nuc));
        }
        _ => eprintln!("unknown probe"),
    }
}
