use vesicle::{c_of_tp, c_of_tp_auto, t_p_general, t_p_q1};

fn main() {
    println!("--- c_of_tp(t, s=2, q=0.8) scan ---");
    for t in [0.05, 0.1, 0.2, 0.2222, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 1.0, 3.0, 6.8] {
        let auto = c_of_tp_auto(t, 2.0, 0.8);
        let d64 = c_of_tp(t, 2.0, 0.8, 64);
        let d4096 = c_of_tp(t, 2.0, 0.8, 4096);
        println!("t={t:<8} auto={auto:?} d64={d64:?} d4096={d4096:?}");
    }
    println!("--- c_of_tp(t, s=0.5, q=0.8) scan ---");
    for t in [0.05, 0.0906, 0.1, 0.2, 0.2222, 0.3, 0.4] {
        let auto = c_of_tp_auto(t, 0.5, 0.8);
        println!("t={t:<8} auto={auto:?}");
    }
    println!("--- q=0.9999, s=1 around t_p(2,1) ---");
    let tp1 = t_p_q1(2.0, 1.0).unwrap();
    for dt in [0.0, 1e-5, 2e-5, 3e-5, 3.5e-5, 4e-5, 1e-4] {
        let t = tp1 + dt;
        println!("t=tp1+{dt:<8} c={:?}", c_of_tp_auto(t, 1.0, 0.9999));
    }
    println!("t_p_general(2,1,0.9999) = {:?}", t_p_general(2.0, 1.0, 0.9999));
    println!("t_p_general(1.2,2,0.8)  = {:?}", t_p_general(1.2, 2.0, 0.8));
    println!("t_p_general(1.2,0.5,0.8)= {:?}", t_p_general(1.2, 0.5, 0.8));
}
