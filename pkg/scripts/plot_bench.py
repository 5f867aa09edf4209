import sys

import matplotlib.pyplot as plt
import pandas as pd

# usage: python scripts/plot_bench.py bench.csv [bench2.csv ...]
fig, ax = plt.subplots()
for filename in sys.argv[1:]:
    table = pd.read_csv(filename)
    for backend, rows in table.groupby('backend'):
        ax.loglog(rows['seconds'], rows['l2_error'], 'o-', label='{} ({})'.format(backend, filename))
        for _, row in rows.iterrows():
            ax.annotate(row['param'], (row['seconds'], row['l2_error']), fontsize=8)
ax.set_xlabel('seconds')
ax.set_ylabel('relative L2 error')
ax.legend()
plt.show()
