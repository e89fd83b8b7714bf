LTLAB_HALF_WIDTH = 15
