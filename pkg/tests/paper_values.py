"""Published reference values used by the acceptance and regression tests."""

TABLE1_ALPHAS = (0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95)

# (theta, gamma) -> ((U, J) for each alpha in TABLE1_ALPHAS)
TABLE1 = {
    (-0.5, 0.5): ((.045, .049), (.092, .099), (.237, .250), (.487, .501), (.742, .751), (.896, .901), (.948, .950)),
    (-0.5, 0.75): ((.035, .047), (.075, .096), (.209, .247), (.458, .502), (.724, .754), (.889, .903), (.944, .952)),
    (-0.5, 1.0): ((.020, .051), (.041, .098), (.110, .234), (.250, .465), (.448, .714), (.637, .879), (.738, .938)),
    (0.0, 0.5): ((.043, .049), (.088, .099), (.228, .248), (.473, .498), (.730, .750), (.890, .901), (.945, .950)),
    (0.0, 0.75): ((.038, .050), (.077, .099), (.199, .243), (.427, .492), (.693, .748), (.872, .901), (.935, .952)),
    (0.0, 1.0): ((.033, .056), (.065, .108), (.161, .251), (.331, .477), (.537, .710), (.709, .868), (.794, .929)),
    (0.5, 0.5): ((.048, .051), (.095, .101), (.238, .251), (.479, .498), (.728, .747), (.886, .897), (.941, .948)),
    (0.5, 0.75): ((.048, .052), (.095, .103), (.236, .255), (.471, .501), (.713, .744), (.871, .893), (.930, .945)),
    (0.5, 1.0): ((.048, .052), (.096, .105), (.237, .259), (.469, .509), (.702, .749), (.852, .890), (.908, .939)),
}

# m -> (L1 coverage, L1 length, L2 coverage, L2 length)
TABLE2 = {
    2: (0.913, 1.149, 0.902, 1.205),
    5: (0.899, 1.193, 0.902, 1.292),
    10: (0.899, 1.183, 0.906, 1.329),
    20: (0.887, 1.148, 0.903, 1.352),
}
