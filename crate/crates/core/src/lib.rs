pub mod cosetrw;
pub mod fpcore;
pub mod permgrp;
pub mod zlat;
pub mod linalg;
pub mod eisen;
pub mod nilquot;
pub mod repchar;
pub mod polyring;
pub mod wedgegeo;
pub mod pipeline;
