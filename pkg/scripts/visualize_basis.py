import os

import matplotlib.pyplot as plt
import numpy as np
from tqdm import tqdm

from moyal.basis import BasisIndex, BasisSpec, analyze, basis_fn
from moyal.phasegrid import PhaseGrid
from moyal.stargrid import twisted_product

N = 4
grid = PhaseGrid(L=10.0, M=128)
extent = [-grid.L, grid.L, -grid.L, grid.L]
os.makedirs('images', exist_ok=True)

fig, axes = plt.subplots(N, N, figsize=(2.5 * N, 2.5 * N))
for m in tqdm(range(N)):
    for n in range(N):
        f = basis_fn(BasisIndex(m, n), grid)
        ax = axes[m, n]
        # brightness |f|, hue arg f
        ax.imshow(np.angle(f.values).T, origin='lower', extent=extent, cmap='hsv',
                  alpha=np.abs(f.values).T / np.abs(f.values).max())
        ax.set_title('f[{},{}]'.format(m, n))
        ax.set_xticks([])
        ax.set_yticks([])
plt.tight_layout()
plt.savefig('images/basis_{}x{}.png'.format(N, N), facecolor='white', edgecolor='none')

#%% A twisted product on the grid and its basis coefficients
f = basis_fn(BasisIndex(1, 2), grid) + basis_fn(BasisIndex(3, 3), grid) * 0.5
g = basis_fn(BasisIndex(2, 0), grid) + basis_fn(BasisIndex(3, 1), grid)
product = twisted_product(f, g)

plt.figure(figsize=(10, 4))
plt.subplot(1, 2, 1)
product.plot(blocking=False)
plt.title('|(f[1,2] + f[3,3]/2) x (f[2,0] + f[3,1])|')
plt.subplot(1, 2, 2)
analyze(product, BasisSpec(N, grid)).plot(blocking=False)
plt.title('|c_mn|')
plt.tight_layout()
plt.savefig('images/product_coefficients.png', facecolor='white', edgecolor='none')
plt.show()
